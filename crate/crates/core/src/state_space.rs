//! The `q`-times integrated Wiener process as a linear state-space model.
//!
//! State layout `(x, x', .., x^(q))`, driven by white noise on the last
//! component. Filtering plus Rauch-Tung-Striebel smoothing reproduces the
//! batch posterior at linear cost.

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::gp::SiteKind;
use crate::linalg::SymmetricFactorization;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorSSM<T: Real> {
    pub q: u8,
    pub sigma2: T,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl<T: Real> IntegratorSSM<T> {
    pub fn new(q: u8, sigma2: T) -> Result<Self> {
        if q > 3 {
            return domain(format!("q = {q} is outside 0..=3"));
        }
        if sigma2 <= T::zero() {
            return domain("sigma2 must be positive");
        }
        Ok(Self { q, sigma2 })
    }

    pub fn dim(&self) -> usize {
        self.q as usize + 1
    }

    /// Drift matrix: ones on the superdiagonal.
    pub fn f(&self) -> DMatrix<T> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| if j == i + 1 { T::one() } else { T::zero() })
    }

    /// Diffusion vector selecting the last state.
    pub fn l(&self) -> DVector<T> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| if i + 1 == n { T::one() } else { T::zero() })
    }

    /// Transition `A = exp(F h)` and process noise `Q` over a step `h >= 0`.
    pub fn discretize(&self, h: &T) -> (DMatrix<T>, DMatrix<T>) {
        let n = self.dim();
        let q = self.q as usize;
        let a = DMatrix::from_fn(n, n, |i, j| {
            if j >= i {
                h.powi((j - i) as u32) / T::int(factorial(j - i))
            } else {
                T::zero()
            }
        });
        let qm = DMatrix::from_fn(n, n, |i, j| {
            let e = 2 * q + 1 - i - j;
            self.sigma2.clone() * h.powi(e as u32) / T::int(e as i64 * factorial(q - i) * factorial(q - j))
        });
        (a, qm)
    }
}

/// Noise-free measurement of `x` (value) or `x'` (derivative).
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement<T> {
    pub t: T,
    pub kind: SiteKind,
    pub value: T,
}

/// Smoothed marginal of `x` at a query time.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal<T> {
    pub t: T,
    pub mean: T,
    pub var: T,
}

struct Slot<T: Real> {
    t: T,
    pred_m: DVector<T>,
    pred_p: DMatrix<T>,
    a: DMatrix<T>,
    m: DVector<T>,
    p: DMatrix<T>,
}

fn check_sorted<T: Real>(ts: impl Iterator<Item = T>, what: &str) -> Result<()> {
    let mut prev: Option<T> = None;
    for t in ts {
        if let Some(p) = &prev {
            if t < *p {
                return domain(format!("{what} times must be sorted"));
            }
        }
        prev = Some(t);
    }
    Ok(())
}

/// Filters `obs` from the zero state at the process origin and smooths back;
/// returns the marginal of `x` at each `grid` point.
pub fn filter_smooth<T: Real>(ssm: &IntegratorSSM<T>, obs: &[Measurement<T>], grid: &[T]) -> Result<Vec<Marginal<T>>> {
    check_sorted(obs.iter().map(|o| o.t.clone()), "observation")?;
    check_sorted(grid.iter().cloned(), "query")?;
    if obs.iter().any(|o| o.kind.is_derivative() && ssm.q == 0) {
        return domain("the q = 0 model has no derivative state");
    }
    if obs.iter().map(|o| &o.t).chain(grid.iter()).any(|t| *t <= T::zero()) {
        return domain("times must lie after the process origin");
    }

    // Merge into distinct time slots.
    let mut times: Vec<T> = obs.iter().map(|o| o.t.clone()).chain(grid.iter().cloned()).collect();
    times.sort_by(|a, b| a.partial_cmp(b).expect("ordered scalars"));
    times.dedup();

    let n = ssm.dim();
    let mut m = DVector::from_element(n, T::zero());
    let mut p = DMatrix::from_element(n, n, T::zero());
    let mut prev = T::zero();
    let mut slots: Vec<Slot<T>> = Vec::with_capacity(times.len());
    let mut oi = 0;
    for t in times {
        let (a, qm) = ssm.discretize(&(t.clone() - prev.clone()));
        m = &a * m;
        p = &a * p * a.transpose() + qm;
        let pred_m = m.clone();
        let pred_p = p.clone();
        while oi < obs.len() && obs[oi].t == t {
            joseph_update(&mut m, &mut p, &obs[oi]);
            oi += 1;
        }
        if p.iter().any(|v| !v.to_f64_lossy().is_finite()) {
            return Err(Error::Numeric("filter covariance diverged".into()));
        }
        slots.push(Slot { t: t.clone(), pred_m, pred_p, a, m: m.clone(), p: p.clone() });
        prev = t;
    }

    // Rauch-Tung-Striebel pass.
    let k = slots.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut sm: Vec<DVector<T>> = vec![DVector::zeros(0); k];
    let mut sp: Vec<DMatrix<T>> = vec![DMatrix::zeros(0, 0); k];
    sm[k - 1] = slots[k - 1].m.clone();
    sp[k - 1] = slots[k - 1].p.clone();
    for i in (0..k - 1).rev() {
        let next = &slots[i + 1];
        // G = P_i A^T P^-_{i+1}^{-1}, from P^- G^T = A P_i.
        let f = SymmetricFactorization::new(&next.pred_p)?;
        let gt = f.solve_matrix(&(&next.a * &slots[i].p));
        let g = gt.transpose();
        sm[i] = &slots[i].m + &g * (&sm[i + 1] - &next.pred_m);
        sp[i] = &slots[i].p + &g * (&sp[i + 1] - &next.pred_p) * &gt;
    }

    let mut out = Vec::with_capacity(grid.len());
    let mut si = 0;
    for t in grid {
        while slots[si].t != *t {
            si += 1;
        }
        out.push(Marginal { t: t.clone(), mean: sm[si][0].clone(), var: sp[si][(0, 0)].clone() });
    }
    Ok(out)
}

fn joseph_update<T: Real>(m: &mut DVector<T>, p: &mut DMatrix<T>, obs: &Measurement<T>) {
    let j = if obs.kind.is_derivative() { 1 } else { 0 };
    let s = p[(j, j)].clone();
    if s.is_zero() {
        return;
    }
    let n = m.len();
    let gain = p.column(j).into_owned() / s;
    let resid = obs.value.clone() - m[j].clone();
    *m += &gain * resid;
    let mut ikh = DMatrix::<T>::identity(n, n);
    for i in 0..n {
        ikh[(i, j)] -= gain[i].clone();
    }
    *p = &ikh * &*p * ikh.transpose();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn once_integrated_discretization() {
        let ssm = IntegratorSSM::new(1, 1.0).unwrap();
        let (a, q) = ssm.discretize(&2.0);
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]));
        assert_eq!(q, DMatrix::from_row_slice(2, 2, &[8.0 / 3.0, 2.0, 2.0, 2.0]));
        let (a0, q0) = IntegratorSSM::new(0, 3.0).unwrap().discretize(&0.5);
        assert_eq!((a0[(0, 0)], q0[(0, 0)]), (1.0, 1.5));
    }

    #[test]
    fn drift_is_nilpotent() {
        for q in 0..=3u8 {
            let ssm = IntegratorSSM::new(q, 1.0).unwrap();
            let f = ssm.f();
            let mut pow = DMatrix::<f64>::identity(ssm.dim(), ssm.dim());
            for _ in 0..=q {
                pow = &pow * &f;
            }
            assert!(pow.iter().all(|v| *v == 0.0));
            assert_eq!(ssm.l()[q as usize], 1.0);
        }
    }

    #[test]
    fn euler_extrapolation() {
        let ssm = IntegratorSSM::new(1, Exact::int(1)).unwrap();
        let t0 = Exact::int(10);
        let obs = [
            Measurement { t: t0.clone(), kind: SiteKind::Value, value: Exact::int(2) },
            Measurement { t: t0.clone(), kind: SiteKind::Derivative, value: Exact::int(-1) },
        ];
        let out = filter_smooth(&ssm, &obs, &[t0.clone(), Exact::int(11)]).unwrap();
        assert_eq!(out[0].mean, Exact::int(2));
        assert_eq!(out[0].var, Exact::int(0));
        assert_eq!(out[1].mean, Exact::int(1));
    }

    #[test]
    fn rejects_unsorted_or_early_times() {
        let ssm = IntegratorSSM::new(1, 1.0).unwrap();
        assert!(filter_smooth(&ssm, &[], &[2.0, 1.0]).is_err());
        assert!(filter_smooth(&ssm, &[], &[0.0]).is_err());
    }
}
