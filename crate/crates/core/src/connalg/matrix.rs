//! Square matrices of rational functions.

use std::fmt;

use super::mpoly::{var_names, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMat {
    size: usize,
    nvars: usize,
    data: Vec<RatFunc>,
}

impl RMat {
    pub fn zero(size: usize, nvars: usize) -> RMat {
        RMat {
            size,
            nvars,
            data: vec![RatFunc::zero(nvars); size * size],
        }
    }

    pub fn identity(size: usize, nvars: usize) -> RMat {
        let mut m = RMat::zero(size, nvars);
        for i in 0..size {
            m.set(i, i, RatFunc::one(nvars));
        }
        m
    }

    /// `None` unless the rows form a square array over a common ring.
    pub fn from_rows(nvars: usize, rows: Vec<Vec<RatFunc>>) -> Option<RMat> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size)
            || rows.iter().flatten().any(|e| e.nvars() != nvars)
        {
            return None;
        }
        Some(RMat {
            size,
            nvars,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(nvars: usize, rows: &[Vec<i64>]) -> Option<RMat> {
        RMat::from_rows(
            nvars,
            rows.iter()
                .map(|r| r.iter().map(|&v| RatFunc::integer(nvars, v)).collect())
                .collect(),
        )
    }

    /// The elementary matrix with a single `1` at `(i, j)`.
    pub fn unit(size: usize, nvars: usize, i: usize, j: usize) -> RMat {
        let mut m = RMat::zero(size, nvars);
        m.set(i, j, RatFunc::one(nvars));
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.size + j] = v;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<RatFunc>> {
        self.data.chunks(self.size.max(1)).take(self.size).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFunc::is_zero)
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> RMat {
        RMat {
            size: self.size,
            nvars: self.nvars,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &RMat, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> RMat {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        RMat {
            size: self.size,
            nvars: self.nvars,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &RMat) -> RMat {
        self.zip(other, RatFunc::add)
    }

    pub fn sub(&self, other: &RMat) -> RMat {
        self.zip(other, RatFunc::sub)
    }

    pub fn neg(&self) -> RMat {
        self.map(RatFunc::neg)
    }

    pub fn scale(&self, c: &RatFunc) -> RMat {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, other: &RMat) -> RMat {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        let n = self.size;
        let mut out = RMat::zero(n, self.nvars);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &RMat) -> RMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> RMat {
        let n = self.size;
        let mut out = RMat::zero(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: usize) -> RMat {
        self.map(|a| a.derivative(v))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Exact determinant by fraction-free expansion along rows.
    pub fn determinant(&self) -> RatFunc {
        fn det(rows: &[Vec<RatFunc>], cols: &[usize], nvars: usize) -> RatFunc {
            if rows.is_empty() {
                return RatFunc::one(nvars);
            }
            let mut acc = RatFunc::zero(nvars);
            for (pos, &c) in cols.iter().enumerate() {
                let a = &rows[0][c];
                if a.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = a.mul(&det(&rows[1..], &rest, nvars));
                acc = if pos % 2 == 0 { acc.add(&minor) } else { acc.sub(&minor) };
            }
            acc
        }
        let cols: Vec<usize> = (0..self.size).collect();
        det(&self.rows(), &cols, self.nvars)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RMat> {
        let n = self.size;
        let mut a = self.rows();
        let mut b = RMat::identity(n, self.nvars).rows();
        for c in 0..n {
            let pr = (c..n).find(|&i| !a[i][c].is_zero())?;
            a.swap(c, pr);
            b.swap(c, pr);
            let inv = a[c][c].inv()?;
            for j in 0..n {
                a[c][j] = a[c][j].mul(&inv);
                b[c][j] = b[c][j].mul(&inv);
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..n {
                        a[i][j] = a[i][j].sub(&f.mul(&a[c][j]));
                        b[i][j] = b[i][j].sub(&f.mul(&b[c][j]));
                    }
                }
            }
        }
        RMat::from_rows(self.nvars, b)
    }

    /// Whether every entry is free of `t`.
    pub fn is_t_free(&self) -> bool {
        self.data.iter().all(|e| !e.depends_on(0))
    }
}

impl fmt::Display for RMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = var_names(self.nvars);
        write!(f, "[")?;
        for i in 0..self.size {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.size {
                if j > 0 {
                    write!(f, ", ")?;
                }
                self.get(i, j).fmt_with(&names, f)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

