//! Symmetric indefinite factorization (Bunch-Kaufman) over any [`Real`].
//!
//! Gram matrices of Wiener kernels with derivative observations are positive
//! semi-definite in exact arithmetic but numerically indefinite, and the
//! bordered systems of the diffuse prior are genuinely indefinite, so a
//! Cholesky factorization is not an option.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bunch-Kaufman pivot growth constant `(1 + sqrt(17)) / 8`.
const BK_ALPHA: f64 = 0.640_388_203_202_208_3;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Block {
    One,
    Two,
    /// Second row of a 2x2 block.
    Tail,
}

/// `P S A S P^T = L D L^T` with a diagonal power-of-two scaling `S`.
#[derive(Debug, Clone)]
pub struct SymmetricFactorization<T: Real> {
    n: usize,
    l: DMatrix<T>,
    d: DMatrix<T>,
    blocks: Vec<Block>,
    perm: Vec<usize>,
    scale: Vec<T>,
    original: DMatrix<T>,
    condition: Option<f64>,
}

impl<T: Real> SymmetricFactorization<T> {
    pub fn new(a: &DMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Domain(format!("matrix is {}x{}, expected square", n, a.ncols())));
        }
        let scale = equilibrate(a);
        let mut w = a.clone();
        for i in 0..n {
            for j in 0..n {
                w[(i, j)] = w[(i, j)].clone() * scale[i].clone() * scale[j].clone();
            }
        }
        let scaled = w.clone();
        let (l, d, blocks, perm) = bunch_kaufman(w)?;
        let mut f = Self {
            n,
            l,
            d,
            blocks,
            perm,
            scale,
            original: a.clone(),
            condition: None,
        };
        if !T::EXACT {
            f.condition = Some(f.condition_of(&scaled));
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// 1-norm condition number of the equilibrated matrix; `None` for exact scalars.
    pub fn condition(&self) -> Option<f64> {
        self.condition
    }

    /// Solves `A x = b`; inexact scalars get two refinement steps with
    /// compensated residuals.
    pub fn solve(&self, b: &DVector<T>) -> DVector<T> {
        let mut x = self.solve_once(b);
        if !T::EXACT {
            for _ in 0..2 {
                let r = self.residual(b, &x);
                x += self.solve_once(&r);
            }
        }
        x
    }

    fn residual(&self, b: &DVector<T>, x: &DVector<T>) -> DVector<T> {
        let n = self.n;
        let mut row = Vec::with_capacity(n + 1);
        let mut xs = Vec::with_capacity(n + 1);
        DVector::from_fn(n, |i, _| {
            row.clear();
            xs.clear();
            row.push(b[i].clone());
            xs.push(T::one());
            for j in 0..n {
                row.push(-self.original[(i, j)].clone());
                xs.push(x[j].clone());
            }
            T::dot(&row, &xs)
        })
    }

    pub fn solve_matrix(&self, b: &DMatrix<T>) -> DMatrix<T> {
        let mut out = DMatrix::zeros(b.nrows(), b.ncols());
        for j in 0..b.ncols() {
            let col = self.solve(&b.column(j).into_owned());
            out.set_column(j, &col);
        }
        out
    }

    fn solve_once(&self, b: &DVector<T>) -> DVector<T> {
        self.solve_scaled(b, true)
    }

    fn solve_scaled(&self, b: &DVector<T>, unscale: bool) -> DVector<T> {
        let n = self.n;
        // Apply S and P.
        let mut y: Vec<T> = (0..n)
            .map(|i| {
                let k = self.perm[i];
                if unscale {
                    b[k].clone() * self.scale[k].clone()
                } else {
                    b[k].clone()
                }
            })
            .collect();
        // Forward substitution with unit lower L.
        for i in 0..n {
            for j in 0..i {
                let lij = self.l[(i, j)].clone();
                if !lij.is_zero() {
                    let t = lij * y[j].clone();
                    y[i] -= t;
                }
            }
        }
        // Block diagonal solve.
        let mut i = 0;
        while i < n {
            match self.blocks[i] {
                Block::One => {
                    y[i] = y[i].clone() / self.d[(i, i)].clone();
                    i += 1;
                }
                Block::Two => {
                    let a = self.d[(i, i)].clone();
                    let c = self.d[(i + 1, i)].clone();
                    let e = self.d[(i + 1, i + 1)].clone();
                    let det = a.clone() * e.clone() - c.clone() * c.clone();
                    let y0 = y[i].clone();
                    let y1 = y[i + 1].clone();
                    y[i] = (e * y0.clone() - c.clone() * y1.clone()) / det.clone();
                    y[i + 1] = (a * y1 - c * y0) / det;
                    i += 2;
                }
                Block::Tail => unreachable!("tail handled with its head"),
            }
        }
        // Backward substitution with L^T.
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let lji = self.l[(j, i)].clone();
                if !lji.is_zero() {
                    let t = lji * y[j].clone();
                    y[i] -= t;
                }
            }
        }
        let mut x = DVector::from_element(n, T::zero());
        for i in 0..n {
            let k = self.perm[i];
            x[k] = if unscale {
                y[i].clone() * self.scale[k].clone()
            } else {
                y[i].clone()
            };
        }
        x
    }

    fn condition_of(&self, scaled: &DMatrix<T>) -> f64 {
        let n = self.n;
        let norm1 = |m: &DMatrix<T>| -> f64 {
            (0..m.ncols())
                .map(|j| (0..m.nrows()).map(|i| m[(i, j)].to_f64_lossy().abs()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let mut inv = DMatrix::from_element(n, n, T::zero());
        for j in 0..n {
            let mut e = DVector::from_element(n, T::zero());
            e[j] = T::one();
            let col = self.solve_scaled(&e, false);
            inv.set_column(j, &col);
        }
        let c = norm1(scaled) * norm1(&inv);
        if c.is_finite() {
            c
        } else {
            f64::INFINITY
        }
    }
}

/// Symmetric power-of-two scaling that brings every row's largest entry near one.
fn equilibrate<T: Real>(a: &DMatrix<T>) -> Vec<T> {
    let n = a.nrows();
    let mut s = vec![T::one(); n];
    if T::EXACT {
        return s;
    }
    for _ in 0..8 {
        let mut changed = false;
        for i in 0..n {
            let mut m = T::zero();
            for j in 0..n {
                let v = (a[(i, j)].clone() * s[i].clone() * s[j].clone()).abs();
                if v > m {
                    m = v;
                }
            }
            let f = T::balancing_scale(&m);
            if !f.is_one() {
                s[i] = s[i].clone() * f;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    s
}

type Factors<T> = (DMatrix<T>, DMatrix<T>, Vec<Block>, Vec<usize>);

fn bunch_kaufman<T: Real>(mut a: DMatrix<T>) -> Result<Factors<T>> {
    let n = a.nrows();
    let alpha = T::from_f64(BK_ALPHA).expect("constant");
    let mut l = DMatrix::<T>::identity(n, n);
    let mut d = DMatrix::from_element(n, n, T::zero());
    let mut blocks = vec![Block::One; n];
    let mut perm: Vec<usize> = (0..n).collect();

    let swap = |a: &mut DMatrix<T>, l: &mut DMatrix<T>, perm: &mut Vec<usize>, k: usize, p: usize| {
        if k == p {
            return;
        }
        a.swap_rows(k, p);
        a.swap_columns(k, p);
        perm.swap(k, p);
        // Already computed columns of L follow the row permutation.
        for j in 0..k {
            let t = l[(k, j)].clone();
            l[(k, j)] = l[(p, j)].clone();
            l[(p, j)] = t;
        }
    };

    let mut k = 0;
    while k < n {
        let absakk = a[(k, k)].abs();
        let (imax, colmax) = ((k + 1)..n)
            .map(|i| (i, a[(i, k)].abs()))
            .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });

        if absakk.is_zero() && colmax.is_zero() {
            return Err(Error::Singular { pivot: k });
        }

        let two_by_two;
        if absakk >= alpha.clone() * colmax.clone() {
            two_by_two = false;
        } else {
            let rowmax = (k..n)
                .filter(|&j| j != imax)
                .map(|j| a[(imax, j)].abs())
                .fold(T::zero(), T::max_of);
            if absakk.clone() * rowmax.clone() >= alpha.clone() * colmax.clone() * colmax.clone() {
                two_by_two = false;
            } else if a[(imax, imax)].abs() >= alpha.clone() * rowmax {
                swap(&mut a, &mut l, &mut perm, k, imax);
                two_by_two = false;
            } else {
                swap(&mut a, &mut l, &mut perm, k + 1, imax);
                two_by_two = true;
            }
        }

        if !two_by_two {
            let dk = a[(k, k)].clone();
            if dk.is_zero() {
                return Err(Error::Singular { pivot: k });
            }
            d[(k, k)] = dk.clone();
            blocks[k] = Block::One;
            let col: Vec<T> = ((k + 1)..n).map(|i| a[(i, k)].clone() / dk.clone()).collect();
            for (ii, i) in ((k + 1)..n).enumerate() {
                for (jj, j) in ((k + 1)..n).enumerate() {
                    if j > i {
                        break;
                    }
                    let upd = col[ii].clone() * col[jj].clone() * dk.clone();
                    let v = a[(i, j)].clone() - upd;
                    a[(i, j)] = v.clone();
                    a[(j, i)] = v;
                }
                l[(i, k)] = col[ii].clone();
            }
            k += 1;
        } else {
            let p = a[(k, k)].clone();
            let c = a[(k + 1, k)].clone();
            let e = a[(k + 1, k + 1)].clone();
            let det = p.clone() * e.clone() - c.clone() * c.clone();
            if det.is_zero() {
                return Err(Error::Singular { pivot: k });
            }
            d[(k, k)] = p.clone();
            d[(k + 1, k)] = c.clone();
            d[(k, k + 1)] = c.clone();
            d[(k + 1, k + 1)] = e.clone();
            blocks[k] = Block::Two;
            blocks[k + 1] = Block::Tail;
            // Rows of W = A[k+2.., k..k+2]; L block = W D^{-1}.
            let rows: Vec<(T, T)> = ((k + 2)..n)
                .map(|i| (a[(i, k)].clone(), a[(i, k + 1)].clone()))
                .collect();
            let lrows: Vec<(T, T)> = rows
                .iter()
                .map(|(w0, w1)| {
                    (
                        (e.clone() * w0.clone() - c.clone() * w1.clone()) / det.clone(),
                        (p.clone() * w1.clone() - c.clone() * w0.clone()) / det.clone(),
                    )
                })
                .collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    if j > i {
                        break;
                    }
                    let upd = lrows[ii].0.clone() * rows[jj].0.clone()
                        + lrows[ii].1.clone() * rows[jj].1.clone();
                    let v = a[(i, j)].clone() - upd;
                    a[(i, j)] = v.clone();
                    a[(j, i)] = v;
                }
                l[(i, k)] = lrows[ii].0.clone();
                l[(i, k + 1)] = lrows[ii].1.clone();
            }
            k += 2;
        }
    }
    Ok((l, d, blocks, perm))
}
