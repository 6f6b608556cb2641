//! Gaussian process regression on mixed value and derivative observations.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::kernels::{wiener_k, wiener_kd, Covariance};
use crate::linalg::SymmetricFactorization;
use crate::scalar::{DoubleDouble, Real};

/// Condition number above which an `f64` Gram matrix is rejected.
pub const CONDITION_LIMIT: f64 = 1e14;

/// The same limit for double-double solves.
pub const WIDE_CONDITION_LIMIT: f64 = 1e28;

type Wide = DoubleDouble;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteKind {
    Value,
    Derivative,
}

impl SiteKind {
    pub fn is_derivative(self) -> bool {
        matches!(self, SiteKind::Derivative)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Site<T> {
    pub t: T,
    pub kind: SiteKind,
}

impl<T> Site<T> {
    pub fn value(t: T) -> Self {
        Self { t, kind: SiteKind::Value }
    }
    pub fn derivative(t: T) -> Self {
        Self { t, kind: SiteKind::Derivative }
    }
}

/// Observations of a scalar process. Values are ordered before derivatives.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservationSet<T> {
    pub values: Vec<(T, T)>,
    pub derivatives: Vec<(T, T)>,
}

impl<T: Real> ObservationSet<T> {
    pub fn new() -> Self {
        Self { values: Vec::new(), derivatives: Vec::new() }
    }

    pub fn with_value(mut self, t: T, x: T) -> Self {
        self.values.push((t, x));
        self
    }

    pub fn with_derivative(mut self, t: T, y: T) -> Self {
        self.derivatives.push((t, y));
        self
    }

    pub fn len(&self) -> usize {
        self.values.len() + self.derivatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sites(&self) -> Vec<Site<T>> {
        self.values
            .iter()
            .map(|(t, _)| Site::value(t.clone()))
            .chain(self.derivatives.iter().map(|(t, _)| Site::derivative(t.clone())))
            .collect()
    }

    pub fn targets(&self) -> DVector<T> {
        DVector::from_iterator(
            self.len(),
            self.values.iter().chain(self.derivatives.iter()).map(|(_, y)| y.clone()),
        )
    }
}

pub fn gram<T: Real, K: Covariance<T>>(kernel: &K, sites: &[Site<T>]) -> Result<DMatrix<T>> {
    let n = sites.len();
    let mut g = DMatrix::from_element(n, n, T::zero());
    for i in 0..n {
        for j in 0..=i {
            let v = kernel.cross(&sites[i].t, sites[i].kind.is_derivative(), &sites[j].t, sites[j].kind.is_derivative())?;
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

fn cross_vector<T: Real, K: Covariance<T>>(kernel: &K, t: &T, kind: SiteKind, sites: &[Site<T>]) -> Result<DVector<T>> {
    let mut v = DVector::from_element(sites.len(), T::zero());
    for (i, s) in sites.iter().enumerate() {
        v[i] = kernel.cross(t, kind.is_derivative(), &s.t, s.kind.is_derivative())?;
    }
    Ok(v)
}

fn factor<T: Real>(g: &DMatrix<T>) -> Result<SymmetricFactorization<T>> {
    let f = SymmetricFactorization::new(g).map_err(|e| match e {
        Error::Singular { .. } => Error::Conditioning { condition: f64::INFINITY, size: g.nrows() },
        other => other,
    })?;
    if let Some(c) = f.condition() {
        if !(c <= CONDITION_LIMIT) {
            return Err(Error::Conditioning { condition: c, size: g.nrows() });
        }
    }
    Ok(f)
}

/// Posterior of a scalar GP given an [`ObservationSet`].
#[derive(Debug, Clone)]
pub struct Posterior<T: Real, K> {
    kernel: K,
    sites: Vec<Site<T>>,
    factor: Arc<SymmetricFactorization<T>>,
    alpha: DVector<T>,
}

impl<T: Real, K: Covariance<T>> Posterior<T, K> {
    pub fn sites(&self) -> &[Site<T>] {
        &self.sites
    }

    pub fn condition(&self) -> Option<f64> {
        self.factor.condition()
    }

    pub fn mean_of(&self, t: &T, kind: SiteKind) -> Result<T> {
        Ok(T::dot(cross_vector(&self.kernel, t, kind, &self.sites)?.as_slice(), self.alpha.as_slice()))
    }

    pub fn mean(&self, t: &T) -> Result<T> {
        self.mean_of(t, SiteKind::Value)
    }

    pub fn mean_derivative(&self, t: &T) -> Result<T> {
        self.mean_of(t, SiteKind::Derivative)
    }

    /// Posterior covariance between the `kind` quantities at `t` and `t2`.
    pub fn cov_of(&self, t: &T, kind: SiteKind, t2: &T, kind2: SiteKind) -> Result<T> {
        let prior = self.kernel.cross(t, kind.is_derivative(), t2, kind2.is_derivative())?;
        let a = cross_vector(&self.kernel, t, kind, &self.sites)?;
        let b = cross_vector(&self.kernel, t2, kind2, &self.sites)?;
        Ok(prior - T::dot(a.as_slice(), self.factor.solve(&b).as_slice()))
    }

    pub fn cov(&self, t: &T, t2: &T) -> Result<T> {
        self.cov_of(t, SiteKind::Value, t2, SiteKind::Value)
    }

    pub fn variance(&self, t: &T) -> Result<T> {
        self.cov(t, t)
    }

    /// Weights `w` with `mean_of(t, kind) = w . targets`.
    pub fn weights(&self, t: &T, kind: SiteKind) -> Result<DVector<T>> {
        Ok(self.factor.solve(&cross_vector(&self.kernel, t, kind, &self.sites)?))
    }
}

pub fn posterior<T: Real, K: Covariance<T> + Clone>(kernel: &K, obs: &ObservationSet<T>) -> Result<Posterior<T, K>> {
    let mut v = multivariate_posterior(kernel, std::slice::from_ref(obs))?;
    Ok(v.pop().expect("one dimension"))
}

/// Independent posteriors per dimension sharing one Gram factorization.
pub fn multivariate_posterior<T: Real, K: Covariance<T> + Clone>(
    kernel: &K,
    obs: &[ObservationSet<T>],
) -> Result<Vec<Posterior<T, K>>> {
    let Some(first) = obs.first() else {
        return domain("multivariate posterior needs at least one dimension");
    };
    if first.is_empty() {
        return domain("observation set is empty");
    }
    let sites = first.sites();
    for o in &obs[1..] {
        if o.sites() != sites {
            return domain("all dimensions must share observation times");
        }
    }
    let f = Arc::new(factor(&gram(kernel, &sites)?)?);
    Ok(obs
        .iter()
        .map(|o| Posterior {
            kernel: kernel.clone(),
            sites: sites.clone(),
            factor: Arc::clone(&f),
            alpha: f.solve(&o.targets()),
        })
        .collect())
}

/// Weights of the posterior mean at `t_query` over the observation sites.
pub fn extrapolation_weights<T: Real, K: Covariance<T>>(
    kernel: &K,
    t_query: &T,
    sites: &[Site<T>],
    query_kind: SiteKind,
) -> Result<DVector<T>> {
    if sites.is_empty() {
        return domain("no observation sites");
    }
    let f = factor(&gram(kernel, sites)?)?;
    Ok(f.solve(&cross_vector(kernel, t_query, query_kind, sites)?))
}

/// Covariance of the `q`-times integrated Wiener increments around an anchor:
/// independent forward and backward processes that vanish at offset zero.
pub fn anchored_noise<T: Real>(q: u8, s: &T, ds: bool, s2: &T, ds2: bool) -> T {
    let zero = T::zero();
    let fwd = *s > zero && *s2 > zero;
    let bwd = *s < zero && *s2 < zero;
    if !(fwd || bwd) {
        return zero;
    }
    let (a, b) = if fwd { (s.clone(), s2.clone()) } else { (-s.clone(), -s2.clone()) };
    let v = match (ds, ds2) {
        (false, false) => wiener_k(q, &a, &b),
        (false, true) => wiener_kd(q, &a, &b),
        (true, false) => wiener_kd(q, &b, &a),
        (true, true) => wiener_k(q - 1, &a, &b),
    };
    // Reflection flips the sign of every derivative.
    if bwd && (ds ^ ds2) {
        -v
    } else {
        v
    }
}

/// Taylor monomials `s^j / j!` (or their derivatives), `j = 0..=q`.
fn basis<T: Real>(q: u8, s: &T, kind: SiteKind) -> DVector<T> {
    let m = q as usize + 1;
    let mut out = DVector::from_element(m, T::zero());
    let mut fact = T::one();
    for j in 0..m {
        if j > 0 {
            fact *= T::int(j as i64);
        }
        out[j] = match kind {
            SiteKind::Value => s.powi(j as u32) / fact.clone(),
            SiteKind::Derivative if j == 0 => T::zero(),
            SiteKind::Derivative => s.powi(j as u32 - 1) * T::int(j as i64) / fact.clone(),
        };
    }
    out
}

/// Posterior under the integrated Wiener prior with the origin pushed to
/// minus infinity: a flat prior on the Taylor state at an anchor plus
/// Wiener increments either side. Covariances are per unit `sigma2`.
///
/// The bordered system is badly conditioned once sites cluster or spread
/// over many steps, so it is solved in double-double arithmetic; only the
/// returned values are rounded. The result does not depend on the anchor,
/// which is placed mid-span.
#[derive(Debug, Clone)]
pub struct DiffusePosterior {
    q: u8,
    anchor: Wide,
    sites: Vec<(Wide, SiteKind)>,
    factor: SymmetricFactorization<Wide>,
    coeffs: Vec<DVector<Wide>>,
}

impl DiffusePosterior {
    /// `values` holds one row per site and one column per output dimension.
    pub fn fit(q: u8, sites: &[Site<f64>], values: &DMatrix<f64>) -> Result<Self> {
        if !(1..=3).contains(&q) {
            return domain(format!("diffuse prior needs q in 1..=3, got {q}"));
        }
        if values.nrows() != sites.len() {
            return domain("one value row per site required");
        }
        if let Some(bad) = sites.iter().map(|s| s.t).chain(values.iter().copied()).find(|v| !v.is_finite()) {
            return domain(format!("non-finite site or value {bad}"));
        }
        let n = sites.len();
        let m = q as usize + 1;
        let (lo, hi) = sites.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.t), hi.max(s.t)));
        let anchor = if n == 0 { Wide::zero() } else { (Wide::from_f64_exact(lo) + Wide::from_f64_exact(hi)) / Wide::int(2) };
        let rel: Vec<(Wide, SiteKind)> =
            sites.iter().map(|s| (Wide::from_f64_exact(s.t) - anchor.clone(), s.kind)).collect();
        let mut kkt = DMatrix::from_element(n + m, n + m, Wide::zero());
        for i in 0..n {
            for j in 0..=i {
                let v = anchored_noise(q, &rel[i].0, rel[i].1.is_derivative(), &rel[j].0, rel[j].1.is_derivative());
                kkt[(i, j)] = v.clone();
                kkt[(j, i)] = v;
            }
            let h = basis(q, &rel[i].0, rel[i].1);
            for j in 0..m {
                kkt[(i, n + j)] = h[j].clone();
                kkt[(n + j, i)] = h[j].clone();
            }
        }
        let factor = SymmetricFactorization::new(&kkt).map_err(|e| match e {
            Error::Singular { .. } => Error::Domain("observations do not determine the diffuse prior state".into()),
            other => other,
        })?;
        if let Some(c) = factor.condition() {
            if !(c <= WIDE_CONDITION_LIMIT) {
                return Err(Error::Conditioning { condition: c, size: n + m });
            }
        }
        let coeffs = (0..values.ncols())
            .map(|d| {
                let rhs = DVector::from_fn(n + m, |i, _| if i < n { Wide::from_f64_exact(values[(i, d)]) } else { Wide::zero() });
                factor.solve(&rhs)
            })
            .collect();
        Ok(Self { q, anchor, sites: rel, factor, coeffs })
    }

    fn offset(&self, t: f64) -> Wide {
        Wide::from_f64_exact(t) - self.anchor.clone()
    }

    fn query(&self, s: &Wide, kind: SiteKind) -> DVector<Wide> {
        let n = self.sites.len();
        let m = self.q as usize + 1;
        let mut v = DVector::from_element(n + m, Wide::zero());
        for (i, (si, ki)) in self.sites.iter().enumerate() {
            v[i] = anchored_noise(self.q, s, kind.is_derivative(), si, ki.is_derivative());
        }
        v.rows_mut(n, m).copy_from(&basis(self.q, s, kind));
        v
    }

    fn combine(&self, v: &DVector<Wide>) -> DVector<f64> {
        DVector::from_iterator(self.coeffs.len(), self.coeffs.iter().map(|c| c.dot(v).to_f64_lossy()))
    }

    pub fn mean(&self, t: f64) -> DVector<f64> {
        self.combine(&self.query(&self.offset(t), SiteKind::Value))
    }

    pub fn mean_derivative(&self, t: f64) -> DVector<f64> {
        self.combine(&self.query(&self.offset(t), SiteKind::Derivative))
    }

    pub fn cov_unit(&self, t: f64, t2: f64) -> f64 {
        let (s, s2) = (self.offset(t), self.offset(t2));
        let a = self.query(&s, SiteKind::Value);
        let b = self.query(&s2, SiteKind::Value);
        let prior = anchored_noise(self.q, &s, false, &s2, false);
        (prior - a.dot(&self.factor.solve(&b))).to_f64_lossy()
    }

    /// Unit-scale variance, clamped at zero.
    pub fn var_unit(&self, t: f64) -> f64 {
        self.cov_unit(t, t).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{IntegratedWiener, SquareExponential};
    use crate::scalar::Exact;

    #[test]
    fn se_one_step_mean() {
        let l = 0.7;
        let se = SquareExponential::new(1.0, l).unwrap();
        let obs = ObservationSet::new().with_value(0.0, 1.3).with_derivative(0.0, -0.4);
        let p = posterior(&se, &obs).unwrap();
        for h in [0.1, 0.5, 1.0] {
            let expect = (-h * h / (2.0 * l * l)).exp() * (1.3 - 0.4 * h);
            assert!((p.mean(&h).unwrap() - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn value_observation_is_interpolated_exactly() {
        let k = IntegratedWiener::new(2, Exact::int(1)).unwrap();
        let obs = ObservationSet::new()
            .with_value(Exact::int(3), Exact::ratio(7, 5))
            .with_derivative(Exact::int(3), Exact::int(2))
            .with_derivative(Exact::ratio(7, 2), Exact::int(-1));
        let p = posterior(&k, &obs).unwrap();
        assert_eq!(p.mean(&Exact::int(3)).unwrap(), Exact::ratio(7, 5));
        assert_eq!(p.variance(&Exact::int(3)).unwrap(), Exact::int(0));
        assert_eq!(p.mean_derivative(&Exact::ratio(7, 2)).unwrap(), Exact::int(-1));
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let se = SquareExponential::new(1.0, 1.0).unwrap();
        let a = ObservationSet::new().with_value(0.0, 1.0);
        let b = ObservationSet::new().with_value(0.5, 1.0);
        assert!(multivariate_posterior(&se, &[a, b]).is_err());
    }

    #[test]
    fn duplicate_sites_are_a_conditioning_error() {
        let se = SquareExponential::new(1.0, 1.0).unwrap();
        let obs = ObservationSet::new().with_value(0.0, 1.0).with_value(0.0, 1.0);
        assert!(matches!(posterior(&se, &obs), Err(Error::Conditioning { .. })));
    }

    #[test]
    fn diffuse_euler_step_is_linear() {
        let sites = [Site::value(0.0), Site::derivative(0.0)];
        let vals = DMatrix::from_column_slice(2, 1, &[2.0, -1.0]);
        let p = DiffusePosterior::fit(1, &sites, &vals).unwrap();
        assert!((p.mean(0.5)[0] - 1.5).abs() < 1e-14);
        assert!((p.var_unit(0.5) - 0.125 / 3.0).abs() < 1e-14);
        assert!((p.mean(-0.5)[0] - 2.5).abs() < 1e-14);
    }

    #[test]
    fn diffuse_posterior_ignores_the_anchor() {
        // Same sites, anchored at the first site and mid-span.
        let sites = [Site::value(0.0), Site::derivative(0.0), Site::derivative(0.5), Site::derivative(2.0)];
        let vals = DMatrix::from_column_slice(4, 1, &[1.0, -0.5, 0.2, 0.7]);
        let p = DiffusePosterior::fit(2, &sites, &vals).unwrap();
        let shifted: Vec<Site<f64>> = sites.iter().map(|s| Site { t: s.t + 3.0, kind: s.kind }).collect();
        let p2 = DiffusePosterior::fit(2, &shifted[..3], &vals.rows(0, 3).into_owned()).unwrap();
        let p1 = DiffusePosterior::fit(2, &sites[..3], &vals.rows(0, 3).into_owned()).unwrap();
        for t in [-0.5, 0.3, 1.0, 2.5] {
            assert!((p2.mean(t + 3.0)[0] - p1.mean(t)[0]).abs() < 1e-12);
            assert!((p2.var_unit(t + 3.0) - p1.var_unit(t)).abs() < 1e-12);
        }
        // Anchoring at the first site by hand gives the same answer.
        let n = sites.len();
        let mut kkt = DMatrix::zeros(n + 3, n + 3);
        for i in 0..n {
            for j in 0..n {
                kkt[(i, j)] = anchored_noise(2, &sites[i].t, sites[i].kind.is_derivative(), &sites[j].t, sites[j].kind.is_derivative());
            }
            let b = basis(2, &sites[i].t, sites[i].kind);
            for j in 0..3 {
                kkt[(i, n + j)] = b[j];
                kkt[(n + j, i)] = b[j];
            }
        }
        let mut rhs = DVector::zeros(n + 3);
        rhs.rows_mut(0, n).copy_from(&vals.column(0));
        let coeffs = kkt.lu().solve(&rhs).unwrap();
        for t in [-0.5, 0.3, 1.0, 2.5] {
            let mut q = DVector::zeros(n + 3);
            for i in 0..n {
                q[i] = anchored_noise(2, &t, false, &sites[i].t, sites[i].kind.is_derivative());
            }
            q.rows_mut(n, 3).copy_from(&basis(2, &t, SiteKind::Value));
            assert!((q.dot(&coeffs) - p.mean(t)[0]).abs() < 1e-12);
        }
    }
}
