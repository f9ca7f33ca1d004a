use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactfield::{q, Q};
use crate::refgroup::Parameter;

/// A module over `H_kappa(C, Z/ell)` spanned by `x^i v` for `i` in `[lo, hi)`.
///
/// `v` lies in the `e_j` eigenspace and the underlying D-module has
/// `d/dx (x^i v) = (i + a) x^{i-1} v`, so that
/// `y x^i v = (i + a + ell (kappa_{i+j} - kappa_0)) x^{i-1} v`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineModule {
    pub ell: u32,
    pub kappa: Vec<Q>,
    pub j: u32,
    pub a: Q,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

/// One composition factor `span{x^i v : lo <= i < hi}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineFactor {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    /// `eu`-eigenvalue of the lowest vector, when there is one.
    pub lowest_weight: Option<Q>,
    /// `eu`-eigenvalue of the highest vector, when there is one.
    pub highest_weight: Option<Q>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionSeries {
    pub factors: Vec<LineFactor>,
    /// Indices `i` where `y x^i v = 0` inside the module.
    pub breaks: Vec<i64>,
    pub window: i64,
    /// All breaks lie within `[-window, window]`.
    pub certified: bool,
}

impl CompositionSeries {
    pub fn length(&self) -> usize {
        self.factors.len()
    }
}

/// `kappa_0, ..., kappa_{ell-1}` of a rank one parameter, as rationals.
pub fn rational_line_kappa(param: &Parameter) -> Result<(u32, Vec<Q>)> {
    let group = param.group();
    if group.dim() != 1 {
        return Err(Error::UnsupportedDimension(format!(
            "line modules need a rank one group, got dimension {}",
            group.dim()
        )));
    }
    if group.hyperplanes().is_empty() {
        return Ok((1, vec![q(0)]));
    }
    let ell = group.orbit_ell(0);
    let kappa = (0..ell as i64)
        .map(|i| {
            param
                .kappa(0, i)
                .to_rational()
                .ok_or_else(|| Error::InvalidInput("line modules need rational parameters".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ell, kappa))
}

impl LineModule {
    /// `Delta(chi)` where the lowest vector spans the `e_j` eigenspace.
    pub fn verma(ell: u32, kappa: Vec<Q>, j: u32) -> Result<LineModule> {
        if kappa.len() != ell as usize || ell == 0 {
            return Err(Error::InvalidInput(format!(
                "need {ell} parameter values, got {}",
                kappa.len()
            )));
        }
        let a = q(ell as i64) * (&kappa[0] - &kappa[j as usize % ell as usize]);
        Ok(LineModule {
            ell,
            kappa,
            j: j % ell,
            a,
            lo: Some(0),
            hi: None,
        })
    }

    /// The polynomial representation `C[x]`.
    pub fn polynomial(ell: u32, kappa: Vec<Q>) -> Result<LineModule> {
        Self::verma(ell, kappa, 0)
    }

    fn kappa_at(&self, i: i64) -> &Q {
        &self.kappa[(i + self.j as i64).rem_euclid(self.ell as i64) as usize]
    }

    /// `y x^i v = c(i) x^{i-1} v` (ignoring the lower end of the support).
    pub fn lowering_coefficient(&self, i: i64) -> Q {
        q(i) + &self.a + q(self.ell as i64) * (self.kappa_at(i) - &self.kappa[0])
    }

    /// `eu x^i v = (i + a - ell kappa_0) x^i v`.
    pub fn eu_eigenvalue(&self, i: i64) -> Q {
        q(i) + &self.a - q(self.ell as i64) * &self.kappa[0]
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo.is_none_or(|lo| i >= lo) && self.hi.is_none_or(|hi| i < hi)
    }

    /// Integers `i` with `c(i) = 0`, solved exactly per residue class.
    pub fn all_zeros(&self) -> Vec<i64> {
        let ell = self.ell as i64;
        let mut out = Vec::new();
        for r in 0..ell {
            let cand = -(&self.a) - q(ell) * (self.kappa_at(r) - &self.kappa[0]);
            if !cand.is_integer() {
                continue;
            }
            let Some(i) = cand.to_integer().to_i64() else {
                continue;
            };
            if i.mod_floor(&ell) == r {
                out.push(i);
            }
        }
        out.sort_unstable();
        out
    }

    /// Zeros strictly above the lower end of the support and below its upper end.
    pub fn breaks(&self) -> Vec<i64> {
        self.all_zeros()
            .into_iter()
            .filter(|&i| self.lo.is_none_or(|lo| i > lo) && self.hi.is_none_or(|hi| i < hi))
            .collect()
    }

    /// The module restricted to `[lo, hi)`.
    pub fn interval(&self, lo: Option<i64>, hi: Option<i64>) -> LineModule {
        LineModule {
            lo,
            hi,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if h <= l)
    }

    /// Sections over `x != 0`; zero for modules supported at the origin.
    pub fn localize(&self) -> Option<LineModule> {
        if self.hi.is_some() || self.is_zero() {
            None
        } else {
            Some(self.interval(None, None))
        }
    }

    /// Composition series; `window` bounds the index range that is
    /// reported as certified.
    pub fn composition_series(&self, window: i64) -> CompositionSeries {
        if self.is_zero() {
            return CompositionSeries {
                factors: Vec::new(),
                breaks: Vec::new(),
                window,
                certified: true,
            };
        }
        let breaks = self.breaks();
        let mut bounds: Vec<Option<i64>> = vec![self.lo];
        bounds.extend(breaks.iter().map(|&b| Some(b)));
        bounds.push(self.hi);
        let factors = bounds
            .windows(2)
            .map(|w| LineFactor {
                lo: w[0],
                hi: w[1],
                lowest_weight: w[0].map(|i| self.eu_eigenvalue(i)),
                highest_weight: w[1].map(|i| self.eu_eigenvalue(i - 1)),
            })
            .collect();
        let certified = breaks.iter().all(|b| b.abs() <= window);
        CompositionSeries {
            factors,
            breaks,
            window,
            certified,
        }
    }

    /// Smallest window containing every break.
    pub fn needed_window(&self) -> i64 {
        self.breaks().iter().map(|b| b.abs()).max().unwrap_or(0)
    }

    /// Whether `x^{-ell k}` generates the localization.
    pub fn generated_by_inverse_power(&self, k: i64) -> bool {
        let start = -(self.ell as i64) * k;
        self.interval(None, None)
            .all_zeros()
            .iter()
            .all(|&z| z > start)
    }
}

/// The shift functor to `kappa'`: localize and reinterpret at the new
/// parameter. `omega_contains_origin` says whether the hyperplane `{0}`
/// belongs to the set where the parameters may differ.
pub fn shift_functor_line(
    m: &LineModule,
    kappa_new: &[Q],
    omega_contains_origin: bool,
) -> Result<Option<LineModule>> {
    if kappa_new.len() != m.kappa.len() {
        return Err(Error::InvalidInput("parameter length mismatch".into()));
    }
    if !omega_contains_origin && kappa_new != m.kappa.as_slice() {
        return Err(Error::IllegalShift(
            "parameters differ on a hyperplane outside the allowed set".into(),
        ));
    }
    Ok(m.localize().map(|l| LineModule {
        kappa: kappa_new.to_vec(),
        ..l
    }))
}

/// Roots of a `b`-function meeting `-k - N`.
pub fn roots_meeting(roots: &[Q], k: i64) -> bool {
    roots.iter().any(|r| {
        let t = -r - q(k);
        t.is_integer() && !t.is_negative()
    })
}

/// Whether `f^{-k}` generates the localized polynomial representation,
/// by the root criterion (sufficient, not necessary).
pub fn generation_by_roots(roots: &[Q], k: i64) -> bool {
    !roots_meeting(roots, k)
}
