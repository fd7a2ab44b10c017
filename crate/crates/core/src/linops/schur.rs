//! Real Schur decomposition with eigenvalue reordering.
//!
//! The decomposition follows the classical EISPACK route: Householder
//! reduction to upper Hessenberg form, then Francis double-shift QR with
//! exceptional shifts. Reordering swaps adjacent diagonal blocks by solving
//! a small Sylvester equation and applying an orthogonal similarity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 200;

/// A real Schur form `M = Q T Qᵀ` with `Q` orthogonal and `T`
/// quasi-upper-triangular (1×1 and 2×2 diagonal blocks).
#[derive(Debug, Clone)]
pub struct RealSchur {
    q: DMatrix<f64>,
    t: DMatrix<f64>,
}

impl RealSchur {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Schur decomposition needs a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let n = m.nrows();
        let mut h = m.clone();
        let mut v = DMatrix::identity(n, n);
        if n > 0 {
            hessenberg(&mut h, &mut v);
            francis_qr(&mut h, &mut v)?;
        }
        let mut schur = RealSchur { q: v, t: h };
        schur.clean_subdiagonal();
        Ok(schur)
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn into_parts(self) -> (DMatrix<f64>, DMatrix<f64>) {
        (self.q, self.t)
    }

    /// Diagonal block layout as `(start, size)` pairs.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let n = self.t.nrows();
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && self.t[(i + 1, i)] != 0.0 {
                out.push((i, 2));
                i += 2;
            } else {
                out.push((i, 1));
                i += 1;
            }
        }
        out
    }

    /// Eigenvalues in block order (the order of the diagonal of `T`).
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.t.nrows());
        for (start, size) in self.blocks() {
            out.extend(block_eigenvalues(&self.t, start, size));
        }
        out
    }

    /// Moves every block whose eigenvalues satisfy `select` to the leading
    /// part of `T`, keeping the relative order within both groups. Returns
    /// the dimension of the leading (selected) invariant subspace.
    pub fn reorder<F>(&mut self, select: F) -> Result<usize>
    where
        F: Fn(Complex64) -> bool,
    {
        let mut blocks: Vec<(usize, bool)> = self
            .blocks()
            .into_iter()
            .map(|(start, size)| (size, select(block_eigenvalues(&self.t, start, size)[0])))
            .collect();

        let mut slot = 0usize; // index in `blocks` of the next selected position
        for idx in 0..blocks.len() {
            if !blocks[idx].1 {
                continue;
            }
            let mut cur = idx;
            while cur > slot {
                let start: usize = blocks[..cur - 1].iter().map(|b| b.0).sum();
                let (p1, p2) = (blocks[cur - 1].0, blocks[cur].0);
                self.swap_adjacent(start, p1, p2)?;
                blocks.swap(cur - 1, cur);
                cur -= 1;
            }
            slot += 1;
        }
        Ok(blocks.iter().filter(|b| b.1).map(|b| b.0).sum())
    }

    /// Swaps the diagonal blocks `T[j..j+p1]` and `T[j+p1..j+p1+p2]`.
    fn swap_adjacent(&mut self, j: usize, p1: usize, p2: usize) -> Result<()> {
        let k = p1 + p2;
        let t11 = self.t.view((j, j), (p1, p1)).clone_owned();
        let t22 = self.t.view((j + p1, j + p1), (p2, p2)).clone_owned();
        let t12 = self.t.view((j, j + p1), (p1, p2)).clone_owned();

        // T11 X - X T22 = T12, vectorized column-major.
        let dim = p1 * p2;
        let mut kron = DMatrix::<f64>::zeros(dim, dim);
        for c in 0..p2 {
            for r in 0..p1 {
                let row = c * p1 + r;
                for rr in 0..p1 {
                    kron[(row, c * p1 + rr)] += t11[(r, rr)];
                }
                for cc in 0..p2 {
                    kron[(row, cc * p1 + r)] -= t22[(cc, c)];
                }
            }
        }
        let rhs = DVector::from_iterator(dim, t12.iter().copied());
        let x = kron
            .full_piv_lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Convergence("block swap: blocks share an eigenvalue".into()))?;

        // Columns of [-X; I] span the invariant subspace belonging to T22.
        let mut aug = DMatrix::<f64>::zeros(k, p2 + k);
        for c in 0..p2 {
            for r in 0..p1 {
                aug[(r, c)] = -x[c * p1 + r];
            }
            aug[(p1 + c, c)] = 1.0;
        }
        for i in 0..k {
            aug[(i, p2 + i)] = 1.0;
        }
        let qs = aug.qr().q();

        let n = self.t.nrows();
        let rows = self.t.view((j, 0), (k, n)).clone_owned();
        self.t.view_mut((j, 0), (k, n)).copy_from(&(qs.transpose() * rows));
        let cols = self.t.view((0, j), (n, k)).clone_owned();
        self.t.view_mut((0, j), (n, k)).copy_from(&(cols * &qs));
        let qcols = self.q.view((0, j), (n, k)).clone_owned();
        self.q.view_mut((0, j), (n, k)).copy_from(&(qcols * &qs));

        let scale = self.t.view((j, j), (k, k)).amax().max(f64::MIN_POSITIVE);
        let leak = self.t.view((j + p2, j), (p1, p2)).amax();
        if leak > 1e-8 * scale {
            return Err(Error::Convergence(format!("block swap rejected (residual {leak:.3e})")));
        }
        self.t.view_mut((j + p2, j), (p1, p2)).fill(0.0);
        if p2 == 2 {
            self.standardize_2x2(j);
        }
        if p1 == 2 {
            self.standardize_2x2(j + p2);
        }
        Ok(())
    }

    /// Splits a 2×2 diagonal block that turned out to carry real eigenvalues.
    fn standardize_2x2(&mut self, j: usize) {
        let (a, b, c, d) = (
            self.t[(j, j)],
            self.t[(j, j + 1)],
            self.t[(j + 1, j)],
            self.t[(j + 1, j + 1)],
        );
        if c == 0.0 {
            return;
        }
        let p = 0.5 * (a - d);
        let disc = p * p + b * c;
        if disc < 0.0 {
            return;
        }
        let root = disc.sqrt();
        let lambda = 0.5 * (a + d) + if p >= 0.0 { root } else { -root };
        // eigenvector of the block for `lambda`
        let (mut v0, mut v1) = (b, lambda - a);
        if v0.abs() + v1.abs() < (lambda - d).abs() + c.abs() {
            v0 = lambda - d;
            v1 = c;
        }
        let norm = v0.hypot(v1);
        if norm == 0.0 {
            return;
        }
        let (cs, sn) = (v0 / norm, v1 / norm);
        let n = self.t.nrows();
        for col in 0..n {
            let (x, y) = (self.t[(j, col)], self.t[(j + 1, col)]);
            self.t[(j, col)] = cs * x + sn * y;
            self.t[(j + 1, col)] = -sn * x + cs * y;
        }
        for row in 0..n {
            let (x, y) = (self.t[(row, j)], self.t[(row, j + 1)]);
            self.t[(row, j)] = cs * x + sn * y;
            self.t[(row, j + 1)] = -sn * x + cs * y;
            let (x, y) = (self.q[(row, j)], self.q[(row, j + 1)]);
            self.q[(row, j)] = cs * x + sn * y;
            self.q[(row, j + 1)] = -sn * x + cs * y;
        }
        self.t[(j + 1, j)] = 0.0;
    }

    fn clean_subdiagonal(&mut self) {
        let n = self.t.nrows();
        for c in 0..n {
            for r in (c + 2)..n {
                self.t[(r, c)] = 0.0;
            }
        }
        // Never allow two consecutive nonzero subdiagonal entries.
        let mut i = 0;
        while i + 1 < n {
            if self.t[(i + 1, i)] != 0.0 {
                if i + 2 < n {
                    self.t[(i + 2, i + 1)] = 0.0;
                }
                self.standardize_2x2(i);
                i += 2;
            } else {
                i += 1;
            }
        }
    }
}

pub(crate) fn block_eigenvalues(t: &DMatrix<f64>, start: usize, size: usize) -> Vec<Complex64> {
    if size == 1 {
        return vec![Complex64::new(t[(start, start)], 0.0)];
    }
    let (a, b, c, d) = (
        t[(start, start)],
        t[(start, start + 1)],
        t[(start + 1, start)],
        t[(start + 1, start + 1)],
    );
    let mid = 0.5 * (a + d);
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        vec![Complex64::new(mid - r, 0.0), Complex64::new(mid + r, 0.0)]
    } else {
        let im = (-disc).sqrt();
        vec![Complex64::new(mid, -im), Complex64::new(mid, im)]
    }
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// orthogonal transform into `v`.
fn hessenberg(h: &mut DMatrix<f64>, v: &mut DMatrix<f64>) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[(m, m - 1)] = scale * g;
    }

    for m in (1..high).rev() {
        if h[(m, m - 1)] == 0.0 {
            continue;
        }
        for i in (m + 1)..=high {
            ort[i] = h[(i, m - 1)];
        }
        for j in m..=high {
            let mut g = 0.0;
            for i in m..=high {
                g += ort[i] * v[(i, j)];
            }
            g = (g / ort[m]) / h[(m, m - 1)];
            for i in m..=high {
                v[(i, j)] += g * ort[i];
            }
        }
    }
    for c in 0..n {
        for r in (c + 2)..n {
            h[(r, c)] = 0.0;
        }
    }
}

/// Francis double-shift QR iteration on an upper Hessenberg matrix,
/// reducing it to real Schur form in place.
fn francis_qr(h: &mut DMatrix<f64>, v: &mut DMatrix<f64>) -> Result<()> {
    let nn = h.nrows();
    let low = 0usize;
    let high = nn - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut n = nn as isize - 1;
    let mut iter = 0usize;
    let (mut p, mut q, mut r, mut s, mut z): (f64, f64, f64, f64, f64);
    let (mut x, mut y, mut w);

    while n >= low as isize {
        let nu = n as usize;
        // single small subdiagonal element
        let mut l = nu;
        while l > low {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }

        if l == nu {
            h[(nu, nu)] += exshift;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (nu - 1)..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in low..=high {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
                h[(nu, nu - 1)] = 0.0;
            }
            n -= 2;
            iter = 0;
        } else {
            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < nu {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }
            // exceptional shifts every tenth sweep, alternating two kinds
            let exceptional = iter > 0 && iter % 10 == 0;
            if exceptional && (iter / 10) % 2 == 1 {
                exshift += x;
                for i in low..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if exceptional && (iter / 10) % 2 == 0 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::Convergence(format!(
                    "Francis QR stalled at index {nu} after {iter} sweeps"
                )));
            }

            // two consecutive small subdiagonal elements
            let mut m = nu - 2;
            loop {
                z = h[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=nu {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=n, columns m..=n
            let mut k = m;
            while k < nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                    for i in low..=high {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(())
}
