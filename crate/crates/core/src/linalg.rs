//! Direct solvers for the Newton systems: dense LU with partial pivoting and a
//! bordered band solver for periodic banded matrices with a few dense rows and
//! columns attached.
//!
//! A cyclic band matrix with half-bandwidth `k` becomes a plain band matrix once
//! its last `k` rows and columns are moved into the border, so both the
//! implicit time step (border = `k`) and the travelling-wave system
//! (border = `k + 2` for the speed and flux constant) use the same type.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Row-major dense matrix factorised in place by Gaussian elimination with partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

impl DenseLu {
    pub fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut piv = vec![0; n];
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMatrix { pivot: k });
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            let d = a[k * n + k];
            for i in k + 1..n {
                let l = a[i * n + k] / d;
                a[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= l * a[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu: a, piv })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for k in 0..n {
            let bk = b[k];
            for i in k + 1..n {
                b[i] -= self.lu[i * n + k] * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..n {
                s -= self.lu[k * n + j] * b[j];
            }
            b[k] = s / self.lu[k * n + k];
        }
    }
}

/// Band matrix in LAPACK `gb` layout with room for pivoting fill-in.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    // column-major, ab[j * ld + kv + i - j] = A(i, j) with kv = kl + ku
    ab: Vec<f64>,
    piv: Vec<usize>,
    factored: bool,
}

impl BandLu {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        Self { n, kl, ku, ld, ab: vec![0.0; ld * n], piv: vec![0; n], factored: false }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ld + self.kl + self.ku + i - j
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.ab[k] += v;
    }

    pub fn clear(&mut self) {
        self.ab.iter_mut().for_each(|x| *x = 0.0);
        self.factored = false;
    }

    /// Unblocked LU with partial pivoting (the `gbtf2` algorithm).
    pub fn factor(&mut self) -> Result<()> {
        let (n, kl, ku, ld) = (self.n, self.kl, self.ku, self.ld);
        let kv = kl + ku;
        let mut ju = 0usize;
        for j in 0..n {
            if j + kv < n {
                for i in 0..kl {
                    self.ab[(j + kv) * ld + i] = 0.0;
                }
            }
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = self.ab[j * ld + kv].abs();
            for t in 1..=km {
                let v = self.ab[j * ld + kv + t].abs();
                if v > best {
                    best = v;
                    jp = t;
                }
            }
            self.piv[j] = j + jp;
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMatrix { pivot: j });
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let a = self.idx(j, c);
                    let b = self.idx(j + jp, c);
                    self.ab.swap(a, b);
                }
            }
            if km > 0 {
                let d = self.ab[j * ld + kv];
                for t in 1..=km {
                    self.ab[j * ld + kv + t] /= d;
                }
                for c in j + 1..=ju {
                    let a = self.ab[self.idx(j, c)];
                    if a != 0.0 {
                        for t in 1..=km {
                            let l = self.ab[j * ld + kv + t];
                            let k = self.idx(j + t, c);
                            self.ab[k] -= l * a;
                        }
                    }
                }
            }
        }
        self.factored = true;
        Ok(())
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        debug_assert!(self.factored);
        let (n, kl, ld) = (self.n, self.kl, self.ld);
        let kv = kl + self.ku;
        for j in 0..n.saturating_sub(1) {
            let lm = kl.min(n - 1 - j);
            let l = self.piv[j];
            if l != j {
                b.swap(l, j);
            }
            let bj = b[j];
            for t in 1..=lm {
                b[j + t] -= self.ab[j * ld + kv + t] * bj;
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.ab[j * ld + kv];
            let bj = b[j];
            for i in j.saturating_sub(kv)..j {
                b[i] -= self.ab[self.idx(i, j)] * bj;
            }
        }
    }
}

/// `[[B, C], [D, E]]` with `B` banded (`nb × nb`) and a dense border of width `r`.
#[derive(Debug, Clone)]
pub struct BorderedBand {
    nb: usize,
    r: usize,
    band: BandLu,
    c: Vec<f64>, // nb × r, column-major (one column per border unknown)
    d: Vec<f64>, // r × nb, row-major
    e: Vec<f64>, // r × r, row-major
}

/// Factorised form of [`BorderedBand`].
#[derive(Debug, Clone)]
pub struct BorderedBandLu {
    nb: usize,
    r: usize,
    band: BandLu,
    y: Vec<f64>, // B⁻¹C, column-major
    d: Vec<f64>,
    schur: Option<DenseLu>,
}

impl BorderedBand {
    /// Total size `n = nb + r`; `kl`, `ku` are the band widths of the leading block.
    pub fn zeros(n: usize, r: usize, kl: usize, ku: usize) -> Self {
        assert!(r < n);
        let nb = n - r;
        Self {
            nb,
            r,
            band: BandLu::zeros(nb, kl, ku),
            c: vec![0.0; nb * r],
            d: vec![0.0; r * nb],
            e: vec![0.0; r * r],
        }
    }

    pub fn size(&self) -> usize {
        self.nb + self.r
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let nb = self.nb;
        match (i < nb, j < nb) {
            (true, true) => self.band.add(i, j, v),
            (true, false) => self.c[(j - nb) * nb + i] += v,
            (false, true) => self.d[(i - nb) * nb + j] += v,
            (false, false) => self.e[(i - nb) * self.r + (j - nb)] += v,
        }
    }

    /// True when `(i, j)` can be stored (inside the band or in the border).
    pub fn accepts(&self, i: usize, j: usize) -> bool {
        i >= self.nb || j >= self.nb || self.band.in_band(i, j)
    }

    pub fn factor(mut self) -> Result<BorderedBandLu> {
        let (nb, r) = (self.nb, self.r);
        self.band.factor()?;
        let mut y = self.c;
        for col in y.chunks_mut(nb) {
            self.band.solve_in_place(col);
        }
        let schur = if r > 0 {
            let mut s = self.e;
            for i in 0..r {
                for j in 0..r {
                    let dot: f64 = (0..nb).map(|k| self.d[i * nb + k] * y[j * nb + k]).sum();
                    s[i * r + j] -= dot;
                }
            }
            Some(DenseLu::factor(r, s)?)
        } else {
            None
        };
        Ok(BorderedBandLu { nb, r, band: self.band, y, d: self.d, schur })
    }
}

impl BorderedBandLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (nb, r) = (self.nb, self.r);
        let (top, bottom) = b.split_at_mut(nb);
        self.band.solve_in_place(top);
        if let Some(s) = &self.schur {
            for i in 0..r {
                let dot: f64 = (0..nb).map(|k| self.d[i * nb + k] * top[k]).sum();
                bottom[i] -= dot;
            }
            s.solve_in_place(bottom);
            for j in 0..r {
                let z = bottom[j];
                for (t, yk) in top.iter_mut().zip(&self.y[j * nb..(j + 1) * nb]) {
                    *t -= yk * z;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_matvec(n: usize, a: &[f64], x: &[f64]) -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum()).collect()
    }

    // Deterministic pseudo-random entries.
    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    }

    #[test]
    fn dense_lu_solves() {
        let n = 6;
        let mut seed = 7;
        let a: Vec<f64> = (0..n * n).map(|_| lcg(&mut seed)).collect();
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let mut b = dense_matvec(n, &a, &x);
        DenseLu::factor(n, a).unwrap().solve_in_place(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_lu_reports_singularity() {
        assert!(matches!(
            DenseLu::factor(2, vec![1.0, 2.0, 2.0, 4.0]),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn cyclic_band_with_border_matches_dense_solve() {
        // Periodic pentadiagonal system plus two dense unknowns, zero-diagonal
        // entries included so that pivoting is exercised.
        let m = 23;
        let k = 2;
        let extra = 2;
        let n = m + extra;
        let mut seed = 42;
        let mut dense = vec![0.0; n * n];
        let mut bb = BorderedBand::zeros(n, k + extra, 1, 2);
        let put = |dense: &mut Vec<f64>, bb: &mut BorderedBand, i: usize, j: usize, v: f64| {
            dense[i * n + j] += v;
            bb.add(i, j, v);
        };
        for i in 0..m {
            for off in [-1isize, 0, 1, 2] {
                let j = ((i as isize + off).rem_euclid(m as isize)) as usize;
                let v = if off == 0 && i % 5 == 0 { 0.0 } else { lcg(&mut seed) };
                put(&mut dense, &mut bb, i, j, v);
            }
            for j in m..n {
                let v = lcg(&mut seed);
                put(&mut dense, &mut bb, i, j, v);
            }
        }
        for i in m..n {
            for j in 0..n {
                let v = lcg(&mut seed);
                put(&mut dense, &mut bb, i, j, v);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut b = dense_matvec(n, &dense, &x);
        let lu = bb.factor().unwrap();
        lu.solve_in_place(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-10, "{u} vs {v}");
        }
    }
}
