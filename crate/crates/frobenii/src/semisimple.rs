//! Semisimple points: canonical coordinates, the orthonormal frame of
//! normalized idempotents, and the isomonodromic system for `V(u)`.

use crate::error::{Error, Result};
use crate::frobenius::FrobeniusPotential;
use crate::kernel::cjson::{matrix_to_pairs, pairs_to_matrix, pairs_to_vec, vec_to_pairs, Pair};
use crate::kernel::matrix::{eigenvalues, null_vector};
use crate::kernel::ode::{integrate, OdeOptions};
use crate::kernel::rational::{to_f64, Rational};
use crate::kernel::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;

/// Default relative collision margin for canonical coordinates.
pub const COLLISION_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    /// Canonical coordinates, sorted by (re, im).
    pub u: Vec<C>,
    /// `ψ_{iα}`, row `i`, column `α`.
    pub psi: ComplexMatrix,
    /// `μ_α = q_α − d/2`.
    pub mu: Vec<Rational>,
    pub eta: ComplexMatrix,
}

/// `min_{i≠j} |u_i − u_j|`.
pub fn min_gap(u: &[C]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            g = g.min((u[i] - u[j]).norm());
        }
    }
    g
}

fn scale_of(u: &[C]) -> f64 {
    u.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0)
}

fn check_distinct(u: &[C], margin: f64) -> Result<()> {
    let g = min_gap(u);
    if g <= margin * scale_of(u) {
        return Err(Error::Collision(g));
    }
    Ok(())
}

/// Root with argument in `(−π/2, π/2]`.
fn principal_sqrt(z: C) -> C {
    let s = z.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

pub fn euler_multiplication(p: &FrobeniusPotential, t: &[C]) -> Result<ComplexMatrix> {
    p.euler_multiplication(t)
}

pub fn canonical_coordinates(p: &FrobeniusPotential, t: &[C]) -> Result<CanonicalFrame> {
    let n = p.n();
    let sc = p.structure_constants()?;
    let eta = sc.eta.to_complex();
    let umat = crate::frobenius::euler_multiplication_with(&sc, &p.euler(), t);
    let u = eigenvalues(&umat)?;
    let g = min_gap(&u);
    if g <= COLLISION_MARGIN * scale_of(&u) {
        return Err(Error::Coalescing(g));
    }
    let cnum: Vec<C> = (0..n * n * n).map(|k| sc.up(k / (n * n), (k / n) % n, k % n).eval(t)).collect();
    let cup = |a: usize, b: usize, g: usize| cnum[(a * n + b) * n + g];
    let mut psi = ComplexMatrix::zero(n);
    for (i, &ui) in u.iter().enumerate() {
        let v = null_vector(&umat, ui);
        // v·v = λ v for an eigenvector of every multiplication operator.
        let sq: Vec<C> = (0..n)
            .map(|gm| {
                let mut s = C::new(0.0, 0.0);
                for a in 0..n {
                    for b in 0..n {
                        s += cup(a, b, gm) * v[a] * v[b];
                    }
                }
                s
            })
            .collect();
        let k = (0..n).max_by(|&x, &y| v[x].norm().total_cmp(&v[y].norm())).unwrap_or(0);
        let lambda = sq[k] / v[k];
        if lambda.norm() < 1e-300 {
            return Err(Error::ZeroPsi);
        }
        let pi: Vec<C> = v.iter().map(|x| x / lambda).collect();
        let ep = eta.apply(&pi);
        let norm2: C = ep.iter().zip(&pi).map(|(a, b)| a * b).sum();
        let scale = pi.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(2) * eta.max_abs();
        if norm2.norm() <= 1e-12 * scale {
            return Err(Error::ZeroPsi);
        }
        let psi1 = principal_sqrt(norm2);
        // ψ_{iα} = ⟨e_α, f_i⟩ with f_i = π_i / ψ_{i1}.
        for a in 0..n {
            psi[(i, a)] = ep[a] / psi1;
        }
    }
    let mu = p.q.iter().map(|q| q - &p.d / Rational::from_integer(2.into())).collect();
    let frame = CanonicalFrame { u, psi, mu, eta };
    let tol = 1e-8;
    let scale = cnum.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let want = sc.low(a, b, c).eval(t);
                if (frame.c_low(a, b, c) - want).norm() > tol * scale {
                    return Err(Error::Invalid(format!("frame does not reproduce c_{{{}{}{}}}", a + 1, b + 1, c + 1)));
                }
            }
        }
    }
    Ok(frame)
}

impl CanonicalFrame {
    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// `Σ_i ψ_{iα}ψ_{iβ}ψ_{iγ} / ψ_{i1}`.
    pub fn c_low(&self, a: usize, b: usize, c: usize) -> C {
        (0..self.n()).map(|i| self.psi[(i, a)] * self.psi[(i, b)] * self.psi[(i, c)] / self.psi[(i, 0)]).sum()
    }

    /// `max |ΨᵀΨ − η|`.
    pub fn orthogonality_residual(&self) -> f64 {
        self.psi.transpose().mul(&self.psi).sub(&self.eta).max_abs()
    }

    /// `max_α |Σ_i ψ_{i1} ψ_i^α − δ^α_1|`, i.e. `Σ ∂/∂u_i` is the unity.
    pub fn unit_field_residual(&self) -> Result<f64> {
        let n = self.n();
        let eta_inv = self.eta.inverse()?;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            let mut s = C::new(0.0, 0.0);
            for i in 0..n {
                let up: C = (0..n).map(|e| eta_inv[(a, e)] * self.psi[(i, e)]).sum();
                s += self.psi[(i, 0)] * up;
            }
            let want = if a == 0 { 1.0 } else { 0.0 };
            worst = worst.max((s - want).norm());
        }
        Ok(worst)
    }

    /// `V = Ψ μ Ψ⁻¹`.
    pub fn v(&self) -> Result<ComplexMatrix> {
        let mu: Vec<C> = self.mu.iter().map(|m| C::new(to_f64(m), 0.0)).collect();
        Ok(self.psi.mul(&ComplexMatrix::diag(&mu)).mul(&self.psi.inverse()?))
    }
}

/// `V_i` with `[U, V_i] = [E_i, V]` and zero diagonal.
pub fn v_i(u: &[C], v: &ComplexMatrix, i: usize) -> Result<ComplexMatrix> {
    let n = u.len();
    check_distinct(u, 0.0)?;
    let mut m = ComplexMatrix::zero(n);
    for a in 0..n {
        for b in 0..n {
            if a != b && (a == i || b == i) {
                let s = if a == i { 1.0 } else { -1.0 };
                m[(a, b)] = v[(a, b)] * s / (u[a] - u[b]);
            }
        }
    }
    Ok(m)
}

pub fn v_matrices(frame: &CanonicalFrame) -> Result<(ComplexMatrix, Vec<ComplexMatrix>)> {
    let v = frame.v()?;
    let vs = (0..frame.n()).map(|i| v_i(&frame.u, &v, i)).collect::<Result<_>>()?;
    Ok((v, vs))
}

#[derive(Clone, Debug)]
pub struct IsoState {
    pub u: Vec<C>,
    pub v: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct IsoStateFile {
    u: Vec<Pair>,
    #[serde(rename = "V")]
    v: Vec<Vec<Pair>>,
}

impl IsoState {
    pub fn new(u: Vec<C>, v: ComplexMatrix) -> Result<Self> {
        if v.n() != u.len() {
            return Err(Error::ArityMismatch(u.len(), v.n()));
        }
        Ok(IsoState { u, v })
    }

    pub fn from_frame(frame: &CanonicalFrame) -> Result<Self> {
        Self::new(frame.u.clone(), frame.v()?)
    }

    pub fn skewness(&self) -> f64 {
        self.v.add(&self.v.transpose()).max_abs()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&IsoStateFile { u: vec_to_pairs(&self.u), v: matrix_to_pairs(&self.v) })
            .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: IsoStateFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if f.v.iter().any(|r| r.len() != f.v.len()) {
            return Err(Error::Parse("V must be square".into()));
        }
        Self::new(pairs_to_vec(&f.u), pairs_to_matrix(&f.v))
    }
}

/// Path JSON: a list of `u`-vectors.
pub fn path_from_json(s: &str) -> Result<Vec<Vec<C>>> {
    let p: Vec<Vec<Pair>> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(p.iter().map(|v| pairs_to_vec(v)).collect())
}

pub fn path_to_json(path: &[Vec<C>]) -> String {
    let p: Vec<Vec<Pair>> = path.iter().map(|v| vec_to_pairs(v)).collect();
    serde_json::to_string(&p).expect("serializable")
}

/// `H_i = ½ Σ_{j≠i} V_{ij}² / (u_i − u_j)`.
pub fn hamiltonians(state: &IsoState) -> Result<Vec<C>> {
    let n = state.u.len();
    check_distinct(&state.u, 0.0)?;
    Ok((0..n)
        .map(|i| {
            (0..n).filter(|&j| j != i).map(|j| state.v[(i, j)].powi(2) / (state.u[i] - state.u[j])).sum::<C>() * 0.5
        })
        .collect())
}

/// `{V_ij, V_kl} = V_il δ_jk − V_jl δ_ik + V_jk δ_il − V_ik δ_jl`.
fn so_bracket(v: &ComplexMatrix, i: usize, j: usize, k: usize, l: usize) -> C {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    v[(i, l)] * d(j, k) - v[(j, l)] * d(i, k) + v[(j, k)] * d(i, l) - v[(i, k)] * d(j, l)
}

/// `max_{i,j} |{H_i, H_j}|` using the linear bracket on the independent
/// coordinates `V_ab`, `a < b`.
pub fn poisson_commutation_check(state: &IsoState) -> Result<f64> {
    let n = state.u.len();
    if n > 6 {
        return Err(Error::Invalid("Poisson check supports n <= 6".into()));
    }
    check_distinct(&state.u, 0.0)?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    // ∂H_i/∂V_ab: H_i contains V_ab² / (u_i − u_other) when i ∈ {a, b}.
    let grad = |i: usize| -> Vec<C> {
        pairs
            .iter()
            .map(|&(a, b)| {
                if i == a {
                    state.v[(a, b)] / (state.u[a] - state.u[b])
                } else if i == b {
                    state.v[(a, b)] / (state.u[b] - state.u[a])
                } else {
                    C::new(0.0, 0.0)
                }
            })
            .collect()
    };
    let grads: Vec<Vec<C>> = (0..n).map(grad).collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut s = C::new(0.0, 0.0);
            for (p, &(a, b)) in pairs.iter().enumerate() {
                for (q, &(c, d)) in pairs.iter().enumerate() {
                    let w = grads[i][p] * grads[j][q];
                    if w.norm() != 0.0 {
                        s += w * so_bracket(&state.v, a, b, c, d);
                    }
                }
            }
            worst = worst.max(s.norm());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoDiagnostics {
    pub max_spectral_drift: f64,
    pub max_skew: f64,
    pub steps: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug)]
pub struct IsoResult {
    pub state: IsoState,
    pub log_tau: C,
    pub diagnostics: IsoDiagnostics,
}

/// Distance between two spectra after greedy nearest matching.
pub fn spectral_distance(a: &[C], b: &[C]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap_or((0, f64::INFINITY));
        if k < used.len() {
            used[k] = true;
        }
        worst = worst.max(d);
    }
    worst
}

/// Smallest `min_{s∈[0,1]} |Δu + s δ|` over all pairs on a segment.
fn segment_gap(u0: &[C], u1: &[C]) -> (f64, f64) {
    let n = u0.len();
    let mut g = f64::INFINITY;
    let mut sc: f64 = 1.0;
    for i in 0..n {
        sc = sc.max(u0[i].norm()).max(u1[i].norm());
        for j in i + 1..n {
            let a = u0[i] - u0[j];
            let b = (u1[i] - u1[j]) - a;
            let s = if b.norm_sqr() == 0.0 { 0.0 } else { (-(a.conj() * b).re / b.norm_sqr()).clamp(0.0, 1.0) };
            g = g.min((a + b * s).norm());
        }
    }
    (g, sc)
}

/// Integrates `∂_i V = [V_i, V]` along the polyline `path` (which must start at
/// `state0.u`) and accumulates `Δ log τ = ∫ Σ H_i du_i`.
pub fn integrate_isomonodromic(state0: &IsoState, path: &[Vec<C>], tol: f64) -> Result<IsoResult> {
    integrate_isomonodromic_with(state0, path, tol, COLLISION_MARGIN)
}

pub fn integrate_isomonodromic_with(state0: &IsoState, path: &[Vec<C>], tol: f64, margin: f64) -> Result<IsoResult> {
    let n = state0.u.len();
    if path.iter().any(|p| p.len() != n) {
        return Err(Error::ArityMismatch(n, path.iter().map(|p| p.len()).find(|&l| l != n).unwrap_or(n)));
    }
    let mut vertices: Vec<Vec<C>> = vec![state0.u.clone()];
    vertices.extend(path.iter().cloned());
    let spec0 = eigenvalues(&state0.v)?;
    let mut v = state0.v.clone();
    let mut log_tau = C::new(0.0, 0.0);
    let mut diag = IsoDiagnostics { max_spectral_drift: 0.0, max_skew: state0.skewness(), steps: 0, rejected: 0 };
    let opts = OdeOptions { hmin: 1e-12, ..OdeOptions::with_tol(tol) };
    for w in vertices.windows(2) {
        let (u0, u1) = (&w[0], &w[1]);
        let du: Vec<C> = u0.iter().zip(u1).map(|(a, b)| b - a).collect();
        if du.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let (gap, sc) = segment_gap(u0, u1);
        if gap <= margin * sc {
            return Err(Error::Collision(gap));
        }
        let upt = |s: f64| -> Vec<C> { u0.iter().zip(&du).map(|(a, d)| a + d * s).collect() };
        let rhs = |s: f64, y: &[C]| -> Result<Vec<C>> {
            let u = upt(s);
            let vm = ComplexMatrix::from_vec(n, y[..n * n].to_vec());
            // Σ_i du_i V_i has entries (du_a − du_b) V_ab / (u_a − u_b).
            let mut wm = ComplexMatrix::zero(n);
            let mut dtau = C::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        let r = vm[(a, b)] / (u[a] - u[b]);
                        wm[(a, b)] = (du[a] - du[b]) * r;
                        // Σ_i H_i du_i = ½ Σ_{a≠b} V_ab² du_a / (u_a − u_b)
                        dtau += vm[(a, b)] * r * du[a] * 0.5;
                    }
                }
            }
            let mut out = wm.commutator(&vm).data().to_vec();
            out.push(dtau);
            Ok(out)
        };
        let mut y0 = v.data().to_vec();
        y0.push(C::new(0.0, 0.0));
        let mut drift: f64 = 0.0;
        let mut skew: f64 = 0.0;
        let guard = |_s: f64, y: &[C]| -> Result<()> {
            let vm = ComplexMatrix::from_vec(n, y[..n * n].to_vec());
            skew = skew.max(vm.add(&vm.transpose()).max_abs());
            drift = drift.max(spectral_distance(&spec0, &eigenvalues(&vm)?));
            Ok(())
        };
        let sol = integrate(rhs, 0.0, 1.0, &y0, &opts, guard)?;
        diag.max_spectral_drift = diag.max_spectral_drift.max(drift);
        diag.max_skew = diag.max_skew.max(skew);
        diag.steps += sol.steps;
        diag.rejected += sol.rejected;
        v = ComplexMatrix::from_vec(n, sol.y[..n * n].to_vec());
        log_tau += sol.y[n * n];
    }
    let u = vertices.last().cloned().unwrap_or_default();
    Ok(IsoResult { state: IsoState { u, v }, log_tau, diagnostics: diag })
}

/// `Δ log τ` along `path`.
pub fn tau_increment(state0: &IsoState, path: &[Vec<C>], tol: f64) -> Result<C> {
    Ok(integrate_isomonodromic(state0, path, tol)?.log_tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::catalog;
    use crate::gw::truncated_potential;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zero(n);
        for a in 0..n {
            for b in a + 1..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(a, b)] = z;
                m[(b, a)] = -z;
            }
        }
        m
    }

    #[test]
    fn cp2_euler_and_frame() {
        let p = truncated_potential(3).unwrap();
        let t2 = 0.3f64;
        let t = [c(0.0, 0.0), c(t2, 0.0), c(0.0, 0.0)];
        let q = t2.exp();
        let u = euler_multiplication(&p, &t).unwrap();
        let want = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0), c(3.0 * q, 0.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(u.approx_eq(&want, 1e-12));
        let f = canonical_coordinates(&p, &t).unwrap();
        let eps = C::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let q3 = q.powf(1.0 / 3.0);
        for z in [c(1.0, 0.0), eps.conj().powi(2), eps.powi(2)] {
            assert!(f.u.iter().any(|x| (x - z * 3.0 * q3).norm() < 1e-10));
        }
        assert!((u.trace() - f.u.iter().sum::<C>()).norm() < 1e-10);
        let s = 1.0 / 3f64.sqrt();
        let rows = [
            [c(1.0 / q3, 0.0), c(1.0, 0.0), c(q3, 0.0)],
            [eps.conj() / q3, c(-1.0, 0.0), eps * q3],
            [eps / q3, c(-1.0, 0.0), eps.conj() * q3],
        ];
        for i in 0..3 {
            let got: Vec<C> = (0..3).map(|a| f.psi[(i, a)]).collect();
            let hit = rows.iter().any(|r| {
                [1.0, -1.0].iter().any(|sg| (0..3).all(|a| (got[a] - r[a] * s * *sg).norm() < 1e-10))
            });
            assert!(hit, "row {i}: {got:?}");
        }
        assert!(f.orthogonality_residual() < 1e-10);
        let (v, vs) = v_matrices(&f).unwrap();
        assert!(v.add(&v.transpose()).max_abs() < 1e-10);
        let spec = eigenvalues(&v).unwrap();
        assert!(spectral_distance(&spec, &[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]) < 1e-9);
        let um = ComplexMatrix::diag(&f.u);
        for (i, vi) in vs.iter().enumerate() {
            let mut ei = ComplexMatrix::zero(3);
            ei[(i, i)] = c(1.0, 0.0);
            assert!(um.commutator(vi).sub(&ei.commutator(&v)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn origin_without_shifts_is_zero() {
        let p = catalog("A3").unwrap();
        assert_eq!(euler_multiplication(&p, &[c(0.0, 0.0); 3]).unwrap().max_abs(), 0.0);
        assert!(matches!(canonical_coordinates(&p, &[c(0.0, 0.0); 3]), Err(Error::Coalescing(_))));
    }

    #[test]
    fn catalog_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["A3", "B3", "H3", "A4", "B4", "D4", "F4", "H4", "I2(5)", "CP1"] {
            let p = catalog(name).unwrap();
            let t: Vec<C> = (0..p.n()).map(|_| c(rng.gen_range(0.2..1.0), rng.gen_range(-0.3..0.3))).collect();
            let f = canonical_coordinates(&p, &t).unwrap();
            assert!(f.orthogonality_residual() < 1e-9, "{name}");
            assert!(f.unit_field_residual().unwrap() < 1e-9, "{name}");
            let v = f.v().unwrap();
            assert!(v.add(&v.transpose()).max_abs() < 1e-8, "{name}");
        }
    }

    #[test]
    fn sign_choice_is_principal() {
        let p = catalog("A3").unwrap();
        let f = canonical_coordinates(&p, &[c(0.1, 0.0), c(0.4, 0.2), c(0.7, -0.1)]).unwrap();
        for i in 0..3 {
            let a = f.psi[(i, 0)].arg();
            assert!(a > -std::f64::consts::FRAC_PI_2 && a <= std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn hamiltonians_basic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = IsoState::new(vec![c(0.0, 0.0), c(1.0, 0.5), c(-0.7, 1.1)], random_skew(3, &mut rng)).unwrap();
        let h = hamiltonians(&s).unwrap();
        assert!(h.iter().sum::<C>().norm() < 1e-14);
        let two = IsoState::new(vec![c(0.0, 0.0), c(2.0, 0.0)], random_skew(2, &mut rng)).unwrap();
        let h2 = hamiltonians(&two).unwrap();
        let vv = two.v[(0, 1)];
        assert!((h2[0] - vv * vv / (2.0 * (two.u[0] - two.u[1]))).norm() < 1e-15);
        assert!((h2[0] + h2[1]).norm() < 1e-15);
        let zero = IsoState::new(s.u.clone(), ComplexMatrix::zero(3)).unwrap();
        assert!(hamiltonians(&zero).unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(hamiltonians(&IsoState::new(vec![c(1.0, 0.0); 2], two.v.clone()).unwrap()).is_err());
    }

    #[test]
    fn poisson_commutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 4, 5] {
            let u: Vec<C> = (0..n).map(|k| c(k as f64 + rng.gen_range(0.0..0.5), rng.gen_range(-1.0..1.0))).collect();
            let s = IsoState::new(u, random_skew(n, &mut rng)).unwrap();
            assert!(poisson_commutation_check(&s).unwrap() < 1e-10);
        }
    }

    #[test]
    fn two_by_two_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = IsoState::new(vec![c(0.0, 0.0), c(1.0, 0.0)], random_skew(2, &mut rng)).unwrap();
        let path = vec![vec![c(0.0, 0.5), c(2.0, 0.0)], vec![c(-0.5, 0.5), c(3.0, 1.0)]];
        let r = integrate_isomonodromic(&s, &path, 1e-11).unwrap();
        assert!(r.state.v.approx_eq(&s.v, 1e-12));
        let vv = s.v[(0, 1)];
        let end = &path[1];
        let want = vv * vv * 0.5 * ((end[0] - end[1]) / (s.u[0] - s.u[1])).ln();
        assert!((r.log_tau - want).norm() < 1e-9, "{} vs {}", r.log_tau, want);
    }

    #[test]
    fn isospectral_and_closed() {
        let p = catalog("A3").unwrap();
        let f = canonical_coordinates(&p, &[c(0.1, 0.0), c(0.4, 0.2), c(0.7, -0.1)]).unwrap();
        let s = IsoState::from_frame(&f).unwrap();
        let same = integrate_isomonodromic(&s, &[s.u.clone()], 1e-10).unwrap();
        assert!(same.state.v.approx_eq(&s.v, 0.0));
        let dir = [c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.3)];
        let norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let end: Vec<C> = s.u.iter().zip(&dir).map(|(a, d)| a + d / norm).collect();
        let r = integrate_isomonodromic(&s, &[end], 1e-10).unwrap();
        assert!(r.diagnostics.max_spectral_drift < 1e-8, "{:?}", r.diagnostics);
        assert!(r.diagnostics.max_skew < 1e-8);
        // small rectangle in the (u_1, u_2) plane
        let h = 0.05;
        let mut loop_path = vec![];
        for (d1, d2) in [(h, 0.0), (h, h), (0.0, h), (0.0, 0.0)] {
            let mut v = s.u.clone();
            v[0] += d1;
            v[1] += c(0.0, d2);
            loop_path.push(v);
        }
        assert!(tau_increment(&s, &loop_path, 1e-11).unwrap().norm() < 1e-8);
        let zero = IsoState::new(s.u.clone(), ComplexMatrix::zero(3)).unwrap();
        assert_eq!(tau_increment(&zero, &loop_path, 1e-10).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn collisions_refused() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = IsoState::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], random_skew(3, &mut rng)).unwrap();
        let path = vec![vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]];
        assert!(matches!(integrate_isomonodromic(&s, &path, 1e-10), Err(Error::Collision(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = IsoState::new(vec![c(0.0, 1.0), c(1.0, -2.0), c(2.5, 0.0)], random_skew(3, &mut rng)).unwrap();
        let back = IsoState::from_json(&s.to_json()).unwrap();
        assert_eq!(back.u, s.u);
        assert!(back.v.approx_eq(&s.v, 0.0));
        let path = vec![s.u.clone()];
        assert_eq!(path_from_json(&path_to_json(&path)).unwrap(), path);
    }
}
