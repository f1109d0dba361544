//! Stokes matrices of semisimple Frobenius manifolds and the braid group
//! action on them, modulo the sign changes `S ~ JSJ`.

use crate::error::{Error, Result};
use crate::kernel::matrix::ExactMatrix;
use crate::kernel::roots::poly_roots;
use crate::kernel::QuadScalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

/// Upper-triangular, unit-diagonal exact matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StokesMatrix {
    m: ExactMatrix,
}

impl StokesMatrix {
    pub fn new(m: ExactMatrix) -> Result<Self> {
        m.field()?;
        for i in 0..m.n() {
            if !m.get(i, i).is_one() {
                return Err(Error::Invalid(format!("s_{{{0}{0}}} must be 1", i + 1)));
            }
            for j in 0..i {
                if !m.get(i, j).is_zero() {
                    return Err(Error::Invalid(format!("s_{{{}{}}} below the diagonal must vanish", i + 1, j + 1)));
                }
            }
        }
        Ok(StokesMatrix { m })
    }

    pub fn identity(n: usize) -> Self {
        StokesMatrix { m: ExactMatrix::identity(n) }
    }

    /// `n = 3` matrix with `(s₁₂, s₁₃, s₂₃) = (x, y, z)`.
    pub fn triple(x: QuadScalar, y: QuadScalar, z: QuadScalar) -> Result<Self> {
        Self::from_upper(3, &[x, y, z])
    }

    /// Strictly upper entries in row-major order.
    pub fn from_upper(n: usize, upper: &[QuadScalar]) -> Result<Self> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::ArityMismatch(n * (n - 1) / 2, upper.len()));
        }
        let mut m = ExactMatrix::identity(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, it.next().cloned().unwrap_or_else(QuadScalar::zero));
            }
        }
        Self::new(m)
    }

    pub fn from_upper_ints(n: usize, upper: &[i64]) -> Self {
        Self::from_upper(n, &upper.iter().map(|&x| QuadScalar::int(x)).collect::<Vec<_>>()).expect("valid Stokes data")
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadScalar {
        self.m.get(i, j)
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.m
    }

    pub fn upper(&self) -> Vec<QuadScalar> {
        let n = self.n();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect()
    }

    /// `(x, y, z)` for `n = 3`.
    pub fn as_triple(&self) -> Option<(QuadScalar, QuadScalar, QuadScalar)> {
        (self.n() == 3).then(|| (self.get(0, 1).clone(), self.get(0, 2).clone(), self.get(1, 2).clone()))
    }

    pub fn field(&self) -> i64 {
        self.m.field().unwrap_or(1)
    }

    /// `J S J` with `J = diag(signs)`.
    pub fn sign_change(&self, signs: &[bool]) -> Self {
        let n = self.n();
        let mut m = self.m.clone();
        for i in 0..n {
            for j in i + 1..n {
                if signs[i] != signs[j] {
                    m.set(i, j, -self.get(i, j));
                }
            }
        }
        StokesMatrix { m }
    }
}

impl fmt::Display for StokesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// A braid word: `k > 0` stands for `σ_k`, `k < 0` for `σ_{|k|}⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BraidWord(pub Vec<i32>);

impl BraidWord {
    pub fn new(gens: Vec<i32>) -> Self {
        BraidWord(gens)
    }

    /// `"1,-2,1"` or `"1 -2 1"`.
    pub fn parse(s: &str) -> Result<Self> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| Error::Parse(format!("bad braid generator '{t}'"))))
            .collect::<Result<Vec<_>>>()
            .map(BraidWord)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for &k in &self.0 {
            if k == 0 || k.unsigned_abs() as usize >= n {
                return Err(Error::Invalid(format!("generator {k} out of range for n = {n}")));
            }
        }
        Ok(())
    }

    /// `(σ₁…σ_{n−1})ⁿ`, which acts trivially modulo signs.
    pub fn zeta(n: usize) -> Self {
        BraidWord((0..n).flat_map(|_| 1..n as i32).collect())
    }
}

/// `K^{(i)}(S)`: identity except the block `[[0, 1], [1, −s_{i,i+1}]]` at `(i, i+1)`.
pub fn braid_factor(s: &StokesMatrix, i: usize) -> ExactMatrix {
    let mut k = ExactMatrix::identity(s.n());
    k.set(i, i, QuadScalar::zero());
    k.set(i, i + 1, QuadScalar::one());
    k.set(i + 1, i, QuadScalar::one());
    k.set(i + 1, i + 1, -s.get(i, i + 1));
    k
}

/// Block `[[a, b], [c, d]]` acting on rows and columns `i, i+1` of `m`: `B m B`.
fn conjugate_block(m: &mut ExactMatrix, i: usize, blk: [[&QuadScalar; 2]; 2]) {
    let n = m.n();
    let comb = |x: &QuadScalar, y: &QuadScalar, p: &QuadScalar, q: &QuadScalar| -> QuadScalar {
        let mut acc = QuadScalar::zero();
        if !p.is_zero() {
            acc = acc + p * x;
        }
        if !q.is_zero() {
            acc = acc + q * y;
        }
        acc
    };
    for c in 0..n {
        let (x, y) = (m.get(i, c).clone(), m.get(i + 1, c).clone());
        m.set(i, c, comb(&x, &y, blk[0][0], blk[0][1]));
        m.set(i + 1, c, comb(&x, &y, blk[1][0], blk[1][1]));
    }
    for r in 0..n {
        let (x, y) = (m.get(r, i).clone(), m.get(r, i + 1).clone());
        m.set(r, i, comb(&x, &y, blk[0][0], blk[1][0]));
        m.set(r, i + 1, comb(&x, &y, blk[0][1], blk[1][1]));
    }
}

/// `σ_i(S) = K S K`; `σ_i⁻¹` conjugates by `K⁻¹` built from the current entry.
pub fn braid_generator(s: &StokesMatrix, g: i32) -> StokesMatrix {
    let i = g.unsigned_abs() as usize - 1;
    let mut m = s.m.clone();
    let (zero, one) = (QuadScalar::zero(), QuadScalar::one());
    let ms = -s.get(i, i + 1);
    if g > 0 {
        conjugate_block(&mut m, i, [[&zero, &one], [&one, &ms]]);
    } else {
        conjugate_block(&mut m, i, [[&ms, &one], [&one, &zero]]);
    }
    StokesMatrix { m }
}

pub fn braid_apply(s: &StokesMatrix, w: &BraidWord) -> Result<StokesMatrix> {
    w.check(s.n())?;
    Ok(w.0.iter().fold(s.clone(), |acc, &g| braid_generator(&acc, g)))
}

/// Same action through full matrix products `K S K`, for cross-checks.
pub fn braid_apply_matrix(s: &StokesMatrix, w: &BraidWord) -> Result<StokesMatrix> {
    w.check(s.n())?;
    let mut cur = s.clone();
    for &g in &w.0 {
        let i = g.unsigned_abs() as usize - 1;
        let k = if g > 0 {
            braid_factor(&cur, i)
        } else {
            let mut k = ExactMatrix::identity(cur.n());
            k.set(i, i, -cur.get(i, i + 1));
            k.set(i, i + 1, QuadScalar::one());
            k.set(i + 1, i, QuadScalar::one());
            k.set(i + 1, i + 1, QuadScalar::zero());
            k
        };
        cur = StokesMatrix::new(k.try_mul(&cur.m)?.try_mul(&k)?)?;
    }
    Ok(cur)
}

/// The closed form `σ₁(x,y,z) = (−x, z, y − xz)`, `σ₂(x,y,z) = (y, x − yz, −z)`.
pub fn braid3_closed(t: (QuadScalar, QuadScalar, QuadScalar), g: i32) -> Result<(QuadScalar, QuadScalar, QuadScalar)> {
    let (x, y, z) = t;
    Ok(match g {
        1 => (-&x, z.clone(), y.try_sub(&x.try_mul(&z)?)?),
        2 => (y.clone(), x.try_sub(&y.try_mul(&z)?)?, -&z),
        _ => return Err(Error::Invalid(format!("closed form covers σ₁, σ₂ only, got {g}"))),
    })
}

/// Representative of `{JSJ}`: entries are visited row-major and every entry
/// whose sign is still free becomes lexicographically nonnegative.
pub fn canonical_form(s: &StokesMatrix) -> StokesMatrix {
    let n = s.n();
    // Union-find with parity: sign(i) = sign(root) · parity(i).
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![false; n];
    fn find(parent: &mut [usize], parity: &mut [bool], i: usize) -> (usize, bool) {
        if parent[i] == i {
            return (i, false);
        }
        let (r, p) = find(parent, parity, parent[i]);
        parent[i] = r;
        parity[i] ^= p;
        (r, parity[i])
    }
    for i in 0..n {
        for j in i + 1..n {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            let (ri, pi) = find(&mut parent, &mut parity, i);
            let (rj, pj) = find(&mut parent, &mut parity, j);
            if ri == rj {
                continue;
            }
            // choose the relative sign so that ε_i ε_j x ⪰ 0
            let flip = !x.is_lex_nonneg();
            let (keep, moved) = if ri < rj { (ri, rj) } else { (rj, ri) };
            parent[moved] = keep;
            parity[moved] = pi ^ pj ^ flip;
        }
    }
    let signs: Vec<bool> = (0..n).map(|i| find(&mut parent, &mut parity, i).1).collect();
    s.sign_change(&signs)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Orbit {
    Finite(Vec<StokesMatrix>),
    Exceeded { visited: usize, frontier: usize },
}

impl Orbit {
    pub fn size(&self) -> Option<usize> {
        match self {
            Orbit::Finite(v) => Some(v.len()),
            Orbit::Exceeded { .. } => None,
        }
    }
}

/// Breadth-first search over `σ_i^{±1}` on canonical forms.
pub fn orbit(s: &StokesMatrix, max_size: usize) -> Orbit {
    let n = s.n();
    let start = canonical_form(s);
    let mut seen: HashSet<StokesMatrix> = HashSet::new();
    let mut order = vec![start.clone()];
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for k in 1..n as i32 {
            for g in [k, -k] {
                let next = canonical_form(&braid_generator(&cur, g));
                if seen.contains(&next) {
                    continue;
                }
                if seen.len() >= max_size {
                    return Orbit::Exceeded { visited: seen.len(), frontier: queue.len() + 1 };
                }
                seen.insert(next.clone());
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Orbit::Finite(order)
}

/// `x² + y² + z² − xyz`.
pub fn markoff_form(x: &QuadScalar, y: &QuadScalar, z: &QuadScalar) -> Result<QuadScalar> {
    x.try_mul(x)?.try_add(&y.try_mul(y)?)?.try_add(&z.try_mul(z)?)?.try_sub(&x.try_mul(y)?.try_mul(z)?)
}

/// `x, y, z ∈ 3ℤ` and `(x/3, y/3, z/3)` solves `x₁² + y₁² + z₁² = 3x₁y₁z₁`.
pub fn is_markoff_times3(x: &QuadScalar, y: &QuadScalar, z: &QuadScalar) -> bool {
    let third = |v: &QuadScalar| -> Option<num_bigint::BigInt> {
        let r = v.as_rational()?;
        if !r.is_integer() {
            return None;
        }
        let k = r.to_integer();
        (&k % 3 == 0.into()).then(|| k / 3)
    };
    match (third(x), third(y), third(z)) {
        (Some(a), Some(b), Some(c)) => &a * &a + &b * &b + &c * &c == 3 * &a * &b * &c,
        _ => false,
    }
}

/// A bipartition `I′ ⊔ I″` with all cross entries zero, if one exists.
pub fn is_reducible(s: &StokesMatrix) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let n = s.n();
    if n > 12 {
        return Err(Error::Invalid("reducibility scan supports n <= 12".into()));
    }
    if n < 2 {
        return Ok(None);
    }
    // index 0 always sits in I′
    for mask in 0u32..(1 << (n - 1)) - 1 {
        let in_first = |i: usize| i == 0 || mask & (1 << (i - 1)) != 0;
        let ok = (0..n).all(|i| (i + 1..n).all(|j| in_first(i) == in_first(j) || s.get(i, j).is_zero()));
        if ok {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| in_first(i));
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct UnipotencySpectrum {
    /// Exact characteristic polynomial of `SᵀS⁻¹`, ascending coefficients.
    pub char_poly: Vec<QuadScalar>,
    pub eigenvalues: Vec<Complex64>,
}

impl UnipotencySpectrum {
    /// `det(λ − SᵀS⁻¹) = (λ − 1)ⁿ` exactly.
    pub fn is_unipotent(&self) -> bool {
        self.char_poly == crate::kernel::matrix::unipotent_char_poly(self.char_poly.len() - 1)
    }
}

pub fn unipotency_spectrum(s: &StokesMatrix) -> Result<UnipotencySpectrum> {
    let m = s.m.transpose().try_mul(&s.m.inverse()?)?;
    let char_poly = m.char_poly()?;
    let c: Vec<Complex64> = char_poly.iter().map(|x| x.to_complex()).collect();
    let mut eigenvalues = poly_roots(&c)?;
    crate::kernel::matrix::sort_spectrum(&mut eigenvalues);
    Ok(UnipotencySpectrum { char_poly, eigenvalues })
}

/// Kronecker product with row-major double indices.
pub fn tensor(a: &StokesMatrix, b: &StokesMatrix) -> Result<StokesMatrix> {
    StokesMatrix::new(a.m.kron(&b.m)?)
}

fn two_cos_pi_over(m: u32) -> Result<QuadScalar> {
    Ok(match m {
        2 => QuadScalar::zero(),
        3 => QuadScalar::one(),
        4 => QuadScalar::sqrt(2)?,
        5 => "1/2+1/2√5".parse()?,
        6 => QuadScalar::sqrt(3)?,
        _ => return Err(Error::UnsupportedLabel(m)),
    })
}

/// `s_{ij} = −2cos(π/m_{ij})` on edges of a Coxeter graph (1-based nodes).
pub fn coxeter_stokes(n: usize, graph: &[(usize, usize, u32)]) -> Result<StokesMatrix> {
    let mut m = ExactMatrix::identity(n);
    for &(i, j, mij) in graph {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::Invalid(format!("bad edge ({i}, {j})")));
        }
        if mij < 3 {
            return Err(Error::UnsupportedLabel(mij));
        }
        let (a, b) = (i.min(j) - 1, i.max(j) - 1);
        m.set(a, b, -two_cos_pi_over(mij)?);
    }
    StokesMatrix::new(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reflections {
    /// `G = (S + Sᵀ)/2`.
    pub gram: ExactMatrix,
    /// `R_j = 1 − E_j (S + Sᵀ)`: it changes only the `j`-th coordinate of a
    /// column vector, and in the row-vector picture it is
    /// `x_k ↦ x_k − (S + Sᵀ)_{kj} x_j`.
    pub r: Vec<ExactMatrix>,
}

pub fn gram_and_reflections(s: &StokesMatrix) -> Result<Reflections> {
    let n = s.n();
    let two_g = s.m.try_add(&s.m.transpose())?;
    if two_g.det()?.is_zero() {
        return Err(Error::DegenerateMetric);
    }
    let gram = two_g.scale(&QuadScalar::rational(crate::kernel::rat(1, 2)))?;
    let r = (0..n)
        .map(|j| {
            let mut m = ExactMatrix::identity(n);
            for k in 0..n {
                let v = m.get(j, k).try_sub(two_g.get(j, k))?;
                m.set(j, k, v);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    Ok(Reflections { gram, r })
}

/// `Mᵀ Q M = Q`.
pub fn preserves_form(m: &ExactMatrix, q: &ExactMatrix) -> Result<bool> {
    Ok(m.transpose().try_mul(q)?.try_mul(m)? == *q)
}

#[derive(Clone, Debug, Serialize)]
pub struct Cp2ModularReport {
    pub reflections_match: bool,
    pub reflections_involutive: bool,
    pub t0_equals_t_r1: bool,
    pub t0_cubed_is_minus_one: bool,
    pub r2_is_conjugate: bool,
    pub r3_is_conjugate: bool,
    pub q_preserved: bool,
    pub b_cubed_is_identity: bool,
}

impl Cp2ModularReport {
    pub fn pass(&self) -> bool {
        self.reflections_match
            && self.reflections_involutive
            && self.t0_equals_t_r1
            && self.t0_cubed_is_minus_one
            && self.r2_is_conjugate
            && self.r3_is_conjugate
            && self.q_preserved
            && self.b_cubed_is_identity
    }
}

pub fn cp2_monodromy_matrices() -> (Vec<ExactMatrix>, ExactMatrix) {
    let r = vec![
        ExactMatrix::from_ints(&[&[-1, -3, 3], &[0, 1, 0], &[0, 0, 1]]),
        ExactMatrix::from_ints(&[&[1, 0, 0], &[-3, -1, 3], &[0, 0, 1]]),
        ExactMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[3, 3, -1]]),
    ];
    let t = ExactMatrix::from_ints(&[&[0, -1, 0], &[0, 0, 1], &[-1, -3, 3]]);
    (r, t)
}

/// Identities of the CP² monodromy group. The reflections are computed from
/// the Stokes matrix in the sign class whose upper entries are `(3, −3, −3)`.
pub fn cp2_modular_check() -> Result<Cp2ModularReport> {
    let s = StokesMatrix::from_upper_ints(3, &[3, -3, -3]);
    let refl = gram_and_reflections(&s)?;
    let (printed, t) = cp2_monodromy_matrices();
    let id = ExactMatrix::identity(3);
    let q = s.m.try_add(&s.m.transpose())?;
    let t0 = t.try_mul(&printed[0])?;
    let t0_inv = t0.inverse()?;
    let conj = |m: &ExactMatrix| -> Result<ExactMatrix> { t0_inv.try_mul(m)?.try_mul(&t0) };
    let mut q_ok = true;
    for m in printed.iter().chain([&t, &t0]) {
        q_ok &= preserves_form(m, &q)?;
    }
    let b = t0.neg();
    Ok(Cp2ModularReport {
        reflections_match: refl.r == printed,
        reflections_involutive: printed.iter().map(|r| r.try_mul(r).map(|x| x == id)).collect::<Result<Vec<_>>>()?.iter().all(|&b| b),
        t0_equals_t_r1: t0 == ExactMatrix::from_ints(&[&[0, -1, 0], &[0, 0, 1], &[1, 0, 0]]),
        t0_cubed_is_minus_one: t0.pow(3)? == id.neg(),
        r2_is_conjugate: conj(&printed[0])? == printed[1],
        r3_is_conjugate: conj(&printed[1])? == printed[2],
        q_preserved: q_ok,
        b_cubed_is_identity: b.pow(3)? == id && t0.pow(4)? == b,
    })
}

fn qs(s: &str) -> QuadScalar {
    s.parse().expect("literal")
}

/// Names accepted by [`stokes_catalog`].
pub fn stokes_names() -> Vec<&'static str> {
    vec![
        "CP1", "CP2", "A3", "B3", "H3", "A4", "B4", "D4", "F4", "H4", "D4-nonstd", "F4-nonstd", "H4-nonstd-1",
        "H4-nonstd-2", "H4-nonstd-3",
    ]
}

pub fn stokes_catalog(name: &str) -> Result<StokesMatrix> {
    let h = |u: [&str; 6]| StokesMatrix::from_upper(4, &u.map(qs));
    match name {
        "CP1" => Ok(StokesMatrix::from_upper_ints(2, &[2])),
        "CP2" => Ok(StokesMatrix::from_upper_ints(3, &[3, 3, 3])),
        "A3" => coxeter_stokes(3, &[(1, 2, 3), (2, 3, 3)]),
        "B3" => coxeter_stokes(3, &[(1, 2, 4), (2, 3, 3)]),
        "H3" => coxeter_stokes(3, &[(1, 2, 5), (2, 3, 3)]),
        "A4" => coxeter_stokes(4, &[(1, 2, 3), (2, 3, 3), (3, 4, 3)]),
        "B4" => coxeter_stokes(4, &[(1, 2, 4), (2, 3, 3), (3, 4, 3)]),
        "D4" => coxeter_stokes(4, &[(1, 2, 3), (2, 3, 3), (2, 4, 3)]),
        "F4" => coxeter_stokes(4, &[(1, 2, 3), (2, 3, 4), (3, 4, 3)]),
        "H4" => coxeter_stokes(4, &[(1, 2, 5), (2, 3, 3), (3, 4, 3)]),
        "D4-nonstd" => h(["-1", "0", "1", "-1", "-1", "1"]),
        "F4-nonstd" => h(["-1", "0", "0+1√2", "0-1√2", "0-1√2", "1"]),
        "H4-nonstd-1" => h(["-1", "0", "1/2+1/2√5", "-1", "-1/2-1/2√5", "-1/2+1/2√5"]),
        "H4-nonstd-2" => h(["-1", "0", "1/2+1/2√5", "-1/2-1/2√5", "-1/2-1/2√5", "1"]),
        "H4-nonstd-3" => h(["-1", "0", "1/2-1/2√5", "-1/2+1/2√5", "-1/2+1/2√5", "1"]),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesFile {
    pub n: usize,
    pub m: i64,
    pub rows: Vec<Vec<String>>,
}

pub fn to_json(s: &StokesMatrix) -> String {
    let f = StokesFile {
        n: s.n(),
        m: s.field(),
        rows: s.m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

pub fn from_json(text: &str) -> Result<StokesMatrix> {
    let f: StokesFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if f.rows.len() != f.n {
        return Err(Error::Parse(format!("expected {} rows", f.n)));
    }
    let rows = f
        .rows
        .iter()
        .map(|r| r.iter().map(|x| x.parse::<QuadScalar>()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let s = StokesMatrix::new(ExactMatrix::from_rows(rows)?)?;
    if s.field() != 1 && s.field() != f.m {
        return Err(Error::FieldMismatch(f.m, s.field()));
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceeded: Option<HashMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<Vec<String>>>,
}

/// JSON-ready orbit summary with at most `cap` representatives.
pub fn orbit_report(o: &Orbit, cap: usize) -> OrbitReport {
    match o {
        Orbit::Finite(v) => OrbitReport {
            size: Some(v.len()),
            exceeded: None,
            representatives: Some(
                v.iter().take(cap).map(|s| s.upper().iter().map(|x| x.to_string()).collect()).collect(),
            ),
        },
        Orbit::Exceeded { visited, frontier } => OrbitReport {
            size: None,
            exceeded: Some(HashMap::from([("visited".to_string(), *visited), ("frontier".to_string(), *frontier)])),
            representatives: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> QuadScalar {
        QuadScalar::int(n)
    }

    fn random(n: usize, rng: &mut ChaCha8Rng) -> StokesMatrix {
        let u: Vec<QuadScalar> = (0..n * (n - 1) / 2).map(|_| q(rng.gen_range(-3..=3))).collect();
        StokesMatrix::from_upper(n, &u).unwrap()
    }

    fn canon_after(s: &StokesMatrix, w: &[i32]) -> StokesMatrix {
        canonical_form(&braid_apply(s, &BraidWord::new(w.to_vec())).unwrap())
    }

    #[test]
    fn markoff_triple_moves() {
        let s = StokesMatrix::from_upper_ints(3, &[3, 3, 3]);
        let t = braid_apply(&s, &BraidWord::new(vec![1])).unwrap();
        assert_eq!(t, StokesMatrix::from_upper_ints(3, &[-3, 3, -6]));
        assert_eq!(canonical_form(&t), StokesMatrix::from_upper_ints(3, &[3, 3, 6]));
        assert_eq!(braid_apply(&s, &BraidWord::default()).unwrap(), s);
        assert_eq!(braid_apply(&s, &BraidWord::new(vec![1, -1])).unwrap(), s);
        assert_eq!(braid_apply(&s, &BraidWord::new(vec![-2, 2])).unwrap(), s);
        assert!(braid_apply(&s, &BraidWord::new(vec![3])).is_err());
    }

    #[test]
    fn generator_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let s = random(3, &mut rng);
            for g in [1, 2, -1, -2] {
                let w = BraidWord::new(vec![g]);
                assert_eq!(braid_apply(&s, &w).unwrap(), braid_apply_matrix(&s, &w).unwrap());
            }
            for g in [1, 2] {
                let want = braid3_closed(s.as_triple().unwrap(), g).unwrap();
                assert_eq!(braid_apply(&s, &BraidWord::new(vec![g])).unwrap().as_triple().unwrap(), want);
            }
            let s4 = random(4, &mut rng);
            let w = BraidWord::new(vec![1, -3, 2, 2, -1]);
            assert_eq!(braid_apply(&s4, &w).unwrap(), braid_apply_matrix(&s4, &w).unwrap());
        }
    }

    #[test]
    fn braid_relations_modulo_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            for n in [3usize, 4, 5] {
                let s = random(n, &mut rng);
                for i in 1..n as i32 - 1 {
                    assert_eq!(canon_after(&s, &[i, i + 1, i]), canon_after(&s, &[i + 1, i, i + 1]));
                }
                for i in 1..n as i32 {
                    for j in i + 2..n as i32 {
                        assert_eq!(canon_after(&s, &[i, j]), canon_after(&s, &[j, i]));
                    }
                }
                if n <= 4 {
                    assert_eq!(canon_after(&s, &BraidWord::zeta(n).0), canonical_form(&s));
                }
            }
        }
    }

    #[test]
    fn canonical_form_well_defined() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let s = random(5, &mut rng);
            let j: Vec<bool> = (0..5).map(|_| rng.gen()).collect();
            assert_eq!(canonical_form(&s.sign_change(&j)), canonical_form(&s));
        }
        assert_eq!(canonical_form(&StokesMatrix::identity(4)), StokesMatrix::identity(4));
    }

    #[test]
    fn markoff_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..30 {
            let s = random(3, &mut rng);
            let (x, y, z) = s.as_triple().unwrap();
            let m0 = markoff_form(&x, &y, &z).unwrap();
            for w in [vec![1], vec![2], vec![-1], vec![2, -1, 2]] {
                let (a, b, c) = braid_apply(&s, &BraidWord::new(w)).unwrap().as_triple().unwrap();
                assert_eq!(markoff_form(&a, &b, &c).unwrap(), m0);
            }
            let (a, b, c) = canonical_form(&s).as_triple().unwrap();
            assert_eq!(markoff_form(&a, &b, &c).unwrap(), m0);
        }
        assert_eq!(markoff_form(&q(3), &q(3), &q(3)).unwrap(), q(0));
        assert_eq!(markoff_form(&q(0), &q(0), &q(0)).unwrap(), q(0));
        assert_eq!(markoff_form(&q(1), &q(1), &q(1)).unwrap(), q(2));
        assert!(is_markoff_times3(&q(3), &q(3), &q(3)));
        assert!(is_markoff_times3(&q(3), &q(3), &q(6)));
        assert!(!is_markoff_times3(&q(1), &q(1), &q(1)));
    }

    #[test]
    fn charpoly_braid_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let n = rng.gen_range(2..=4);
            let s = random(n, &mut rng);
            let w: Vec<i32> = (0..4).map(|_| rng.gen_range(1..n as i32) * if rng.gen() { 1 } else { -1 }).collect();
            let t = braid_apply(&s, &BraidWord::new(w)).unwrap();
            assert_eq!(unipotency_spectrum(&s).unwrap().char_poly, unipotency_spectrum(&t).unwrap().char_poly);
        }
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit(&StokesMatrix::identity(3), 10).size(), Some(1));
        let a3 = stokes_catalog("A3").unwrap();
        assert_eq!(a3.upper(), vec![q(-1), q(0), q(-1)]);
        let alt = StokesMatrix::from_upper_ints(3, &[-1, -1, 0]);
        let o1 = orbit(&a3, 1_000_000);
        let o2 = orbit(&alt, 1_000_000);
        assert!(o1.size().is_some());
        assert_eq!(o1.size(), o2.size());
        let cp2 = stokes_catalog("CP2").unwrap();
        assert!(matches!(orbit(&cp2, 10_000), Orbit::Exceeded { .. }));
        // (σ₁σ₂)³ is central, so use the hyperbolic word σ₁σ₂⁻¹
        let mut cur = cp2;
        let mut last = 0.0;
        for _ in 0..5 {
            cur = braid_apply(&cur, &BraidWord::new(vec![1, -2])).unwrap();
            let m = cur.upper().iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
            assert!(m > last);
            last = m;
        }
    }

    #[test]
    fn catalog_orbit_sizes() {
        // sizes modulo sign changes, from the BFS itself
        let want = [
            ("CP1", 1),
            ("A3", 4),
            ("B3", 9),
            ("H3", 10),
            ("A4", 25),
            ("B4", 64),
            ("D4", 9),
            ("F4", 36),
            ("H4", 90),
            ("D4-nonstd", 4),
            ("F4-nonstd", 9),
            ("H4-nonstd-1", 90),
            ("H4-nonstd-2", 10),
            ("H4-nonstd-3", 10),
        ];
        for (name, size) in want {
            assert_eq!(orbit(&stokes_catalog(name).unwrap(), 1_000_000).size(), Some(size), "{name}");
        }
    }

    #[test]
    fn reducibility() {
        assert!(is_reducible(&StokesMatrix::identity(3)).unwrap().is_some());
        assert!(is_reducible(&stokes_catalog("CP2").unwrap()).unwrap().is_none());
        let s = StokesMatrix::from_upper_ints(4, &[0, 2, 0, 0, 5, 0]);
        assert_eq!(is_reducible(&s).unwrap(), Some((vec![0, 2], vec![1, 3])));
    }

    #[test]
    fn spectra() {
        let cp2 = unipotency_spectrum(&stokes_catalog("CP2").unwrap()).unwrap();
        assert!(cp2.is_unipotent());
        // For n = 2 the spectrum is e^{±2πiμ} with μ = ±1/2, i.e. {−1, −1}.
        let cp1 = unipotency_spectrum(&stokes_catalog("CP1").unwrap()).unwrap();
        assert_eq!(cp1.char_poly, vec![q(1), q(2), q(1)]);
        assert!(unipotency_spectrum(&StokesMatrix::identity(4)).unwrap().is_unipotent());
        let not = unipotency_spectrum(&StokesMatrix::from_upper_ints(3, &[1, 1, 1])).unwrap();
        assert!(!not.is_unipotent());
    }

    #[test]
    fn tensor_products() {
        let s = stokes_catalog("CP1").unwrap();
        let t = tensor(&s, &s).unwrap();
        assert_eq!(t.n(), 4);
        let row: Vec<QuadScalar> = (1..4).map(|j| t.get(0, j).clone()).collect();
        assert_eq!(row, vec![q(2), q(2), q(4)]);
        let i_s = tensor(&StokesMatrix::identity(1), &stokes_catalog("CP2").unwrap()).unwrap();
        assert_eq!(i_s, stokes_catalog("CP2").unwrap());
        let a = StokesMatrix::from_upper_ints(2, &[1]);
        let b = StokesMatrix::from_upper_ints(3, &[1, 2, 0]);
        let sa = unipotency_spectrum(&a).unwrap().eigenvalues;
        let sb = unipotency_spectrum(&b).unwrap().eigenvalues;
        let st = unipotency_spectrum(&tensor(&a, &b).unwrap()).unwrap().eigenvalues;
        let prods: Vec<Complex64> = sa.iter().flat_map(|x| sb.iter().map(move |y| x * y)).collect();
        for z in &st {
            assert!(prods.iter().any(|p| (p - z).norm() < 1e-6), "{z}");
        }
    }

    #[test]
    fn coxeter_values() {
        let h3 = stokes_catalog("H3").unwrap();
        assert_eq!(h3.upper(), vec![qs("-1/2-1/2√5"), q(0), q(-1)]);
        let b2 = coxeter_stokes(2, &[(1, 2, 4)]).unwrap();
        assert_eq!(b2.get(0, 1), &-QuadScalar::sqrt(2).unwrap());
        assert!(matches!(coxeter_stokes(2, &[(1, 2, 7)]), Err(Error::UnsupportedLabel(7))));
    }

    #[test]
    fn reflections() {
        let r = gram_and_reflections(&stokes_catalog("CP2").unwrap()).unwrap();
        let q2 = r.gram.scale(&q(2)).unwrap();
        for m in &r.r {
            assert_eq!(m.try_mul(m).unwrap(), ExactMatrix::identity(3));
            assert!(preserves_form(m, &q2).unwrap());
        }
        let rep = cp2_modular_check().unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!(gram_and_reflections(&StokesMatrix::from_upper_ints(2, &[2])).is_err());
    }

    #[test]
    fn catalog_and_json() {
        for name in stokes_names() {
            let s = stokes_catalog(name).unwrap();
            assert_eq!(from_json(&to_json(&s)).unwrap(), s, "{name}");
        }
        let h = stokes_catalog("H4-nonstd-1").unwrap();
        assert_eq!(h.get(0, 1), &q(-1));
        assert_eq!(h.get(0, 3), &qs("1/2+1/2√5"));
        assert_eq!(stokes_catalog("CP2").unwrap().as_triple().unwrap(), (q(3), q(3), q(3)));
        assert!(stokes_catalog("E6").is_err());
    }
}
