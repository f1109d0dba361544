//! Small dense matrices: exact over ℚ(√m), and complex double precision.

use super::quad::QuadScalar;
use super::rational::int;
use super::roots::poly_roots;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

type C = Complex64;

// ---------------------------------------------------------------------------
// Exact matrices

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    n: usize,
    a: Vec<QuadScalar>,
}

impl ExactMatrix {
    pub fn zero(n: usize) -> Self {
        ExactMatrix { n, a: vec![QuadScalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, QuadScalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<QuadScalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix is not square".into()));
        }
        let m = ExactMatrix { n, a: rows.into_iter().flatten().collect() };
        m.field()?;
        Ok(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| QuadScalar::int(x)).collect()).collect();
        Self::from_rows(rows).expect("square integer matrix")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadScalar {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadScalar) {
        self.a[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<QuadScalar>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// The common quadratic field (1 if all entries are rational).
    pub fn field(&self) -> Result<i64> {
        let mut f = 1;
        for x in &self.a {
            match (f, x.field()) {
                (_, 1) => {}
                (1, m) => f = m,
                (a, b) if a != b => return Err(Error::FieldMismatch(a, b)),
                _ => {}
            }
        }
        Ok(f)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::ArityMismatch(self.n, o.n));
        }
        let n = self.n;
        let mut r = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = r.get(i, j).try_add(&a.try_mul(b)?)?;
                    r.set(i, j, v);
                }
            }
        }
        Ok(r)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::ArityMismatch(self.n, o.n));
        }
        let a = self.a.iter().zip(&o.a).map(|(x, y)| x.try_add(y)).collect::<Result<_>>()?;
        Ok(ExactMatrix { n: self.n, a })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ExactMatrix { n: self.n, a: self.a.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, c: &QuadScalar) -> Result<Self> {
        let a = self.a.iter().map(|x| x.try_mul(c)).collect::<Result<_>>()?;
        Ok(ExactMatrix { n: self.n, a })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &[QuadScalar]) -> Result<Vec<QuadScalar>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(QuadScalar::zero(), |acc, j| acc.try_add(&self.get(i, j).try_mul(&v[j])?))
            })
            .collect()
    }

    /// Row vector times matrix: `v·M`.
    pub fn apply_left(&self, v: &[QuadScalar]) -> Result<Vec<QuadScalar>> {
        self.transpose().apply(v)
    }

    pub fn trace(&self) -> Result<QuadScalar> {
        (0..self.n).try_fold(QuadScalar::zero(), |acc, i| acc.try_add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Exact solution of `A x = b` by Gaussian elimination over the field.
    pub fn solve(&self, rhs: &[QuadScalar]) -> Result<Vec<QuadScalar>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::ArityMismatch(n, rhs.len()));
        }
        let mut m: Vec<Vec<QuadScalar>> = self.rows();
        for (row, b) in m.iter_mut().zip(rhs) {
            row.push(b.clone());
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
            m.swap(col, piv);
            let inv = m[col][col].inverse()?;
            for j in col..=n {
                m[col][j] = m[col][j].try_mul(&inv)?;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in col..=n {
                        let v = m[r][j].try_sub(&f.try_mul(&m[col][j])?)?;
                        m[r][j] = v;
                    }
                }
            }
        }
        Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut inv = Self::zero(n);
        for j in 0..n {
            let mut e = vec![QuadScalar::zero(); n];
            e[j] = QuadScalar::one();
            let col = self.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<QuadScalar> {
        let n = self.n;
        let mut m = self.rows();
        let mut det = QuadScalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(QuadScalar::zero());
            };
            if piv != col {
                m.swap(col, piv);
                det = -det;
            }
            det = det.try_mul(&m[col][col])?;
            let inv = m[col][col].inverse()?;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].try_mul(&inv)?;
                for j in col..n {
                    let v = m[r][j].try_sub(&f.try_mul(&m[col][j])?)?;
                    m[r][j] = v;
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(λ − A)` as coefficients `[c_0, .., c_n]`
    /// (ascending, monic), by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Result<Vec<QuadScalar>> {
        let n = self.n;
        let mut c = vec![QuadScalar::zero(); n + 1];
        c[n] = QuadScalar::one();
        let mut mk = Self::zero(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.try_mul(&mk)?;
            for i in 0..n {
                let v = next.get(i, i).try_add(&c[n - k + 1])?;
                next.set(i, i, v);
            }
            mk = next;
            let tr = self.try_mul(&mk)?.trace()?;
            c[n - k] = -tr.scale(&(super::rational::Rational::new(1.into(), (k as i64).into())));
        }
        Ok(c)
    }

    /// Kronecker product with row-major index pairing.
    pub fn kron(&self, o: &Self) -> Result<Self> {
        let (n1, n2) = (self.n, o.n);
        let mut r = Self::zero(n1 * n2);
        for i1 in 0..n1 {
            for j1 in 0..n1 {
                let a = self.get(i1, j1);
                for i2 in 0..n2 {
                    for j2 in 0..n2 {
                        r.set(i1 * n2 + i2, j1 * n2 + j2, a.try_mul(o.get(i2, j2))?);
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.n, self.a.iter().map(|x| x.to_complex()).collect())
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows() {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", s.join(", "))?;
        }
        Ok(())
    }
}

/// Exact solve entry point used by the rest of the toolkit.
pub fn exact_solve(a: &ExactMatrix, rhs: &[QuadScalar]) -> Result<Vec<QuadScalar>> {
    a.solve(rhs)
}

/// `(λ − 1)^n` coefficients, ascending.
pub fn unipotent_char_poly(n: usize) -> Vec<QuadScalar> {
    let mut c = vec![QuadScalar::one()];
    for _ in 0..n {
        let mut next = vec![QuadScalar::zero(); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + x;
            next[i] = &next[i] - x;
        }
        c = next;
    }
    c
}

// ---------------------------------------------------------------------------
// Complex matrices

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    a: Vec<C>,
    /// Entry-wise tolerance used by approximate predicates.
    pub tol: f64,
}

impl ComplexMatrix {
    pub fn zero(n: usize) -> Self {
        ComplexMatrix { n, a: vec![C::new(0.0, 0.0); n * n], tol: 1e-10 }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(n: usize, a: Vec<C>) -> Self {
        assert_eq!(a.len(), n * n);
        ComplexMatrix { n, a, tol: 1e-10 }
    }

    pub fn from_rows(rows: &[Vec<C>]) -> Self {
        let n = rows.len();
        Self::from_vec(n, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn diag(d: &[C]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[C] {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<C>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut r = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    r.a[i * n + j] += a * o[(k, j)];
                }
            }
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_vec(self.n, self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_vec(self.n, self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, c: C) -> Self {
        Self::from_vec(self.n, self.a.iter().map(|x| x * c).collect())
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.n).map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn trace(&self) -> C {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.sub(o).max_abs() <= tol
    }

    /// LU with partial pivoting; returns `None` when a pivot vanishes.
    fn lu(&self) -> Option<(Vec<C>, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))?;
            if a[p * n + k].norm() <= 1e-300 * scale {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                let f = a[i * n + k] / a[k * n + k];
                a[i * n + k] = f;
                for j in k + 1..n {
                    let v = a[k * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn det(&self) -> C {
        match self.lu() {
            None => C::new(0.0, 0.0),
            Some((a, _, sign)) => (0..self.n).map(|i| a[i * self.n + i]).product::<C>() * sign,
        }
    }

    pub fn solve(&self, b: &[C]) -> Result<Vec<C>> {
        let n = self.n;
        let (a, perm, _) = self.lu().ok_or(Error::Singular)?;
        let mut y: Vec<C> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = y[j];
                y[i] -= a[i * n + j] * v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = y[j];
                y[i] -= a[i * n + j] * v;
            }
            y[i] /= a[i * n + i];
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut inv = Self::zero(n);
        for j in 0..n {
            let mut e = vec![C::new(0.0, 0.0); n];
            e[j] = C::new(1.0, 0.0);
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(λ − M)`, ascending monic coefficients,
    /// by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<C> {
        let n = self.n;
        let mut c = vec![C::new(0.0, 0.0); n + 1];
        c[n] = C::new(1.0, 0.0);
        let mut mk = Self::zero(n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                next[(i, i)] += c[n - k + 1];
            }
            mk = next;
            c[n - k] = -self.mul(&mk).trace() / k as f64;
        }
        c
    }

    /// Eigenvalues (sorted by real then imaginary part) and eigenvectors
    /// (columns, unit Euclidean norm).
    pub fn eigen(&self) -> Result<(Vec<C>, Vec<Vec<C>>)> {
        let vals = eigenvalues(self)?;
        let vecs = vals.iter().map(|&l| null_vector(self, l)).collect();
        Ok((vals, vecs))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.a[i * self.n + j]
    }
}

/// Lexicographic (re, im) ordering of eigenvalues used everywhere.
pub fn sort_spectrum(v: &mut [C]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues via characteristic polynomial roots, sorted by (re, im).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C>> {
    if m.n > 16 {
        return Err(Error::Invalid("eigen_small supports n <= 16".into()));
    }
    // Balance the scale so the polynomial coefficients stay moderate.
    let s = m.max_abs();
    if s == 0.0 {
        return Ok(vec![C::new(0.0, 0.0); m.n]);
    }
    let scaled = m.scale(C::new(1.0 / s, 0.0));
    let mut r: Vec<C> = poly_roots(&scaled.char_poly())?.into_iter().map(|z| z * s).collect();
    sort_spectrum(&mut r);
    Ok(r)
}

/// A unit vector spanning (approximately) the kernel of `M − λ`.
pub fn null_vector(m: &ComplexMatrix, lambda: C) -> Vec<C> {
    let n = m.n;
    let mut a = m.sub(&ComplexMatrix::identity(n).scale(lambda)).a;
    // Gaussian elimination with complete pivoting; the last pivot is ~0.
    let mut colperm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = a[i * n + j].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if pv <= 0.0 {
            break;
        }
        for j in 0..n {
            a.swap(k * n + j, pi * n + j);
        }
        for i in 0..n {
            a.swap(i * n + k, i * n + pj);
        }
        colperm.swap(k, pj);
        if k == n - 1 {
            break;
        }
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            for j in k..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    // Choose the free variable at the smallest pivot, back-substitute.
    let mut free = n - 1;
    let mut smallest = f64::INFINITY;
    for k in 0..n {
        let v = a[k * n + k].norm();
        if v < smallest {
            smallest = v;
            free = k;
        }
    }
    let mut y = vec![C::new(0.0, 0.0); n];
    y[free] = C::new(1.0, 0.0);
    for i in (0..free).rev() {
        let mut s = C::new(0.0, 0.0);
        for j in i + 1..=free {
            s += a[i * n + j] * y[j];
        }
        y[i] = -s / a[i * n + i];
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for (k, &c) in colperm.iter().enumerate() {
        x[c] = y[k];
    }
    // One step of inverse iteration tightens the residual.
    let shift = lambda + C::new(1e-13 * (1.0 + lambda.norm()), 0.0);
    if let Ok(z) = m.sub(&ComplexMatrix::identity(n).scale(shift)).solve(&x) {
        if z.iter().all(|v| v.is_finite()) {
            x = z;
        }
    }
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    x.iter().map(|v| v / norm).collect()
}

/// `‖Mv − λv‖` for a unit eigenvector.
pub fn eigen_residual(m: &ComplexMatrix, lambda: C, v: &[C]) -> f64 {
    m.apply(v).iter().zip(v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt()
}

/// Small integer helper shared with exact code.
pub fn qint(n: i64) -> QuadScalar {
    QuadScalar::rational(int(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn exact_solve_and_inverse() {
        let id = ExactMatrix::identity(3);
        let b = vec![qint(1), qint(-2), qint(5)];
        assert_eq!(exact_solve(&id, &b).unwrap(), b);
        let ad = ExactMatrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert_eq!(ad.inverse().unwrap(), ad);
        let ones = ExactMatrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(ones.solve(&[qint(1), qint(2)]), Err(Error::Singular));
        let a = ExactMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x).unwrap(), b);
    }

    #[test]
    fn exact_char_poly() {
        let s = ExactMatrix::from_ints(&[&[1, 2], &[0, 1]]);
        let m = s.transpose().try_mul(&s.inverse().unwrap()).unwrap();
        // λ² − (2 − s²)λ + 1 with s = 2
        assert_eq!(m.char_poly().unwrap(), vec![qint(1), qint(2), qint(1)]);
        assert_eq!(unipotent_char_poly(2), vec![qint(1), qint(-2), qint(1)]);
        let a = ExactMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let cp = a.char_poly().unwrap();
        assert_eq!(cp[0], -a.det().unwrap());
    }

    #[test]
    fn diag_and_zero_spectra() {
        let d = ComplexMatrix::diag(&[c(3.0), c(1.0), c(2.0)]);
        let ev = eigenvalues(&d).unwrap();
        for (e, w) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((e - c(w)).norm() < 1e-12);
        }
        let z = eigenvalues(&ComplexMatrix::zero(3)).unwrap();
        assert!(z.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn cp2_cyclic_matrix() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0), c(0.0), c(3.0)],
            vec![c(3.0), c(0.0), c(0.0)],
            vec![c(0.0), c(3.0), c(0.0)],
        ]);
        let (vals, vecs) = m.eigen().unwrap();
        let eps = C::from_polar(1.0, std::f64::consts::PI / 3.0);
        let mut want = vec![c(3.0), eps.powi(2) * 3.0, eps.conj().powi(2) * 3.0];
        sort_spectrum(&mut want);
        for ((v, w), x) in vals.iter().zip(&want).zip(&vecs) {
            assert!((v - w).norm() < 1e-12);
            assert!(eigen_residual(&m, *v, x) < 1e-12);
        }
    }

    #[test]
    fn trace_and_det_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a: Vec<C> = (0..36).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let m = ComplexMatrix::from_vec(6, a);
            let ev = eigenvalues(&m).unwrap();
            let tr: C = ev.iter().sum();
            let det: C = ev.iter().product();
            assert!((tr - m.trace()).norm() <= 1e-10 * m.trace().norm().max(1.0));
            assert!((det - m.det()).norm() <= 1e-10 * m.det().norm().max(1.0));
        }
    }
}
