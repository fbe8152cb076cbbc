//! Matrices over Z/p^N and their Smith normal form.
//!
//! Z/p^N is a local principal ideal ring: every entry is `p^k * unit`, so choosing
//! a pivot of minimal valuation lets it divide everything remaining in its row
//! and column, and one elimination sweep per pivot suffices.

use crate::arith::{inv_mod, mul_mod, vp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpMatrix {
    p: u64,
    prec: u32,
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZpMatrix {
    pub fn zeros(p: u64, prec: u32, rows: usize, cols: usize) -> Self {
        let modulus = p
            .checked_pow(prec)
            .filter(|m| *m < (1 << 62))
            .expect("p^N must fit in 62 bits");
        ZpMatrix {
            p,
            prec,
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, prec: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, prec, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries given as signed integers, reduced mod p^N.
    pub fn from_rows(p: u64, prec: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, prec, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x.rem_euclid(m.modulus as i64) as u64);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(p: u64, prec: u32, rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, prec, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn mul(&self, other: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = ZpMatrix::zeros(self.p, self.prec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + mul_mod(a, other.get(k, j), self.modulus));
                }
            }
        }
        out
    }

    pub fn hconcat(&self, other: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = ZpMatrix::zeros(self.p, self.prec, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Rows `range` of the matrix.
    pub fn row_block(&self, start: usize, end: usize) -> ZpMatrix {
        let mut out = ZpMatrix::zeros(self.p, self.prec, end - start, self.cols);
        for i in start..end {
            for j in 0..self.cols {
                out.set(i - start, j, self.get(i, j));
            }
        }
        out
    }

    /// Same entries read at a different precision (entries reduced or kept).
    pub fn with_precision(&self, prec: u32) -> ZpMatrix {
        let mut out = ZpMatrix::zeros(self.p, prec, self.rows, self.cols);
        for (k, &x) in self.data.iter().enumerate() {
            out.data[k] = x % out.modulus;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn val(&self, x: u64) -> u32 {
        if x == 0 {
            self.prec
        } else {
            vp(x, self.p)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_dst -= c * row_src
    fn row_axpy(&mut self, dst: usize, src: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s != 0 {
                let d = self.get(dst, j);
                self.set(dst, j, d + m - mul_mod(c, s, m));
            }
        }
    }

    /// col_dst -= c * col_src
    fn col_axpy(&mut self, dst: usize, src: usize, c: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s != 0 {
                let d = self.get(i, dst);
                self.set(i, dst, d + m - mul_mod(c, s, m));
            }
        }
    }
}

/// `U A V = diag(p^{k_0} u_0, ...)`; only `V` is kept.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Valuations of the nonzero diagonal entries, in pivot order.
    pub diagonal: Vec<u32>,
    /// Column transform: columns of `V` map diagonal coordinates back to the input basis.
    pub v: ZpMatrix,
    pub rows: usize,
    pub cols: usize,
}

/// c with c * pivot ≡ a (mod p^N), given v_p(a) >= v_p(pivot) = k.
fn quotient(a: u64, pivot: u64, k: u32, p: u64, m: u64) -> u64 {
    let pk = p.pow(k);
    let unit = pivot / pk;
    let inv = inv_mod(unit, m).expect("pivot part is a unit");
    mul_mod(a / pk, inv, m)
}

pub fn snf(a: &ZpMatrix) -> SmithForm {
    let mut d = a.clone();
    let mut v = ZpMatrix::identity(a.p, a.prec, a.cols);
    let (p, m) = (a.p, a.modulus);
    let steps = a.rows.min(a.cols);
    let mut diagonal = Vec::new();
    for t in 0..steps {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..d.rows {
            for j in t..d.cols {
                let x = d.get(i, j);
                if x == 0 {
                    continue;
                }
                let k = d.val(x);
                if best.map_or(true, |(bk, _, _)| k < bk) {
                    best = Some((k, i, j));
                    if k == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((k, bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        let pivot = d.get(t, t);
        for i in t + 1..d.rows {
            let x = d.get(i, t);
            if x != 0 {
                d.row_axpy(i, t, quotient(x, pivot, k, p, m));
            }
        }
        for j in t + 1..d.cols {
            let x = d.get(t, j);
            if x != 0 {
                let c = quotient(x, pivot, k, p, m);
                d.col_axpy(j, t, c);
                v.col_axpy(j, t, c);
            }
        }
        diagonal.push(k);
    }
    SmithForm {
        diagonal,
        v,
        rows: a.rows,
        cols: a.cols,
    }
}

impl ZpMatrix {
    /// Exponents of `(Z/p^N)^rows / column span`; free summands appear with exponent N.
    pub fn cokernel_exponents(&self) -> Vec<u32> {
        let s = snf(self);
        let mut exps: Vec<u32> = s.diagonal.clone();
        exps.extend(std::iter::repeat(self.prec).take(self.rows - s.diagonal.len()));
        exps.retain(|&e| e > 0);
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps
    }

    /// Generators (as columns) of `{x : A x = 0}` in `(Z/p^N)^cols`.
    pub fn kernel(&self) -> ZpMatrix {
        let s = snf(self);
        let mut gens = Vec::new();
        for t in 0..self.cols {
            let scale = match s.diagonal.get(t) {
                Some(&k) if k == 0 => continue,
                Some(&k) => self.p.pow(self.prec - k),
                None => 1,
            };
            let col: Vec<u64> = s
                .v
                .column(t)
                .into_iter()
                .map(|x| mul_mod(x, scale, self.modulus))
                .collect();
            if col.iter().any(|&x| x != 0) {
                gens.push(col);
            }
        }
        ZpMatrix::from_columns(self.p, self.prec, self.cols, &gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_presentations() {
        let a = ZpMatrix::from_rows(2, 5, &[vec![4]]);
        assert_eq!(a.cokernel_exponents(), vec![2]);
        let b = ZpMatrix::from_rows(2, 5, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(b.cokernel_exponents(), vec![1, 1]);
        let free = ZpMatrix::zeros(3, 4, 2, 0);
        assert_eq!(free.cokernel_exponents(), vec![4, 4]);
    }

    #[test]
    fn non_diagonal_presentation() {
        // Z^2 / <(2,1),(0,4)> has order 8 and is cyclic.
        let a = ZpMatrix::from_rows(2, 6, &[vec![2, 0], vec![1, 4]]);
        assert_eq!(a.cokernel_exponents(), vec![3]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = ZpMatrix::from_rows(2, 4, &[vec![2, 4, 6], vec![0, 8, 4]]);
        let k = a.kernel();
        assert!(a.mul(&k).is_zero());
        // the kernel has order 2^(3*4) / |image| and image order is 2^3 * 2^2
        let cok = a.cokernel_exponents();
        let image_log: u32 = 2 * 4 - cok.iter().sum::<u32>();
        let ker_log: u32 = 3 * 4 - image_log;
        let sub = k.hconcat(&ZpMatrix::zeros(2, 4, 3, 0));
        let quotient_log: u32 = sub.cokernel_exponents().iter().sum();
        assert_eq!(3 * 4 - quotient_log, ker_log);
    }
}
