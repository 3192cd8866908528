//! The two equality lists of the Szegő-type theorem, evaluated at every
//! finite truncation σ(n), plus the square-sum/product condition report.

use serde::Serialize;

use crate::christoffel::{christoffel_approx, minimizer_q, quadratic_functional};
use crate::freemonoid::{words_up_to_length, Word};
use crate::moments::MomentFamily;
use crate::orthopoly::{gram_schmidt, OrthonormalFamily};
use crate::tuple::MatrixTuple;
use crate::verblunsky::{extract_from_family, synthesize, VerblunskyFamily};
use crate::{Error, Result};

/// One truncation level of the two equality lists. The first list holds
/// ‖Φ_{σ(n)}‖², a_{σ(n),σ(n)}^{−2}, the σ-line defect product, and the
/// determinant ratio; the second holds the full defect product, Λ_n(0),
/// the reverse-polynomial and CD-kernel values at zero, and the minimiser
/// functional. Residuals are the worst pairwise deviations within each
/// list.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SzegoRow {
    pub n: usize,
    pub item_i: f64,
    pub item_ii: f64,
    pub item_iii: f64,
    pub item_iv: f64,
    pub item_v: f64,
    pub item_vi: f64,
    pub item_vii: f64,
    pub item_viii: f64,
    pub item_ix: f64,
    pub res_first: f64,
    pub res_second: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SzegoTable {
    pub rows: Vec<SzegoRow>,
    /// Set when positivity failed before the requested depth; the rows
    /// cover the levels that were still non-trivial.
    pub truncated: bool,
}

fn pairwise_max_dev(values: &[f64]) -> f64 {
    let mut dev = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            dev = dev.max((a - b).abs());
        }
    }
    dev
}

/// Largest n such that every word up to σ(n) sits strictly below `row` in
/// shortlex position.
fn usable_depth(row: usize, d: u8, n_max: usize) -> usize {
    let mut n = 0;
    while n < n_max {
        match words_up_to_length(n + 1, d) {
            Ok(count) if count as usize <= row => n += 1,
            _ => break,
        }
    }
    n
}

/// Evaluates both equality lists for n = 0..=n_max. On a positivity
/// failure partway up, returns the rows before the failure with the
/// `truncated` flag set.
pub fn szego_table(m: &MomentFamily, n_max: usize) -> Result<SzegoTable> {
    let d = m.alphabet();
    let mut depth = n_max;
    let mut truncated = false;
    let family: OrthonormalFamily = loop {
        match gram_schmidt(m, &Word::sigma(depth, d)) {
            Ok(f) => break f,
            Err(Error::NotNontrivial { row, .. }) => {
                truncated = true;
                depth = usable_depth(row, d, depth);
                if depth == 0 && row == 0 {
                    return Err(Error::Degenerate("kernel block is trivial at the empty word".into()));
                }
            }
            Err(e) => return Err(e),
        }
    };

    let extraction = extract_from_family(&family)?;
    let gamma: &VerblunskyFamily = &extraction.gamma;
    let pair = synthesize(gamma, family.sigma0())?;
    let origin = MatrixTuple::scalar_zero(d);

    let mut rows = Vec::with_capacity(depth + 1);
    let mut sigma_line_product = 1.0f64;
    for n in 0..=depth {
        let sigma_n = Word::sigma(n, d);
        let idx = family.index_of(&sigma_n)?;

        let monic = family.monic(&sigma_n)?;
        let item_i = m.inner_product(&monic, &monic)?.re;
        let item_ii = family.leading(idx).powi(-2);
        if n > 0 {
            sigma_line_product *= 1.0 - gamma.gamma(&sigma_n)?.norm_sqr();
        }
        let item_iii = sigma_line_product;
        // D_{σ(n)}/D_{σ(n)−1} through log-determinant differences; the
        // plain ratio under/overflows well inside desk scale.
        let log_det = m
            .determinant_log(&sigma_n)?
            .ok_or_else(|| Error::Degenerate(format!("singular block at {sigma_n}")))?;
        let item_iv = if n == 0 {
            log_det.exp()
        } else {
            let pred_log_det = m
                .determinant_log(&sigma_n.predecessor()?)?
                .ok_or_else(|| Error::Degenerate(format!("singular block before {sigma_n}")))?;
            (log_det - pred_log_det).exp()
        };

        let item_v = gamma.product_and_sum(&sigma_n)?.partial_product;
        let item_vi = christoffel_approx(&family, n, &origin)?[(0, 0)].re;
        let item_vii = pair.phi_sharp(idx).constant_term().norm_sqr().recip();
        let zero_sum: f64 = (0..=idx).map(|i| family.phi_at_zero(i).norm_sqr()).sum();
        let item_viii = zero_sum.recip();
        let q = minimizer_q(&family, n, &origin)?;
        let item_ix = quadratic_functional(m, &q)?[(0, 0)].re;

        let res_first = pairwise_max_dev(&[item_i, item_ii, item_iii, item_iv]);
        let res_second = pairwise_max_dev(&[item_v, item_vi, item_vii, item_viii, item_ix]);
        rows.push(SzegoRow {
            n,
            item_i,
            item_ii,
            item_iii,
            item_iv,
            item_v,
            item_vi,
            item_vii,
            item_viii,
            item_ix,
            res_first,
            res_second,
        });
    }
    Ok(SzegoTable { rows, truncated })
}

/// Descriptive trend of the square sum and defect product along a horizon
/// list; convergence cannot be decided from finite data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Trend {
    ProductStabilizing,
    ProductVanishing,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionRow {
    pub upto: Word,
    pub square_sum: f64,
    pub product: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub rows: Vec<ConditionRow>,
    pub verdict: Trend,
}

/// Monotone traces of Σ|γ|² and ∏(1−|γ|²) along the given horizons. The
/// verdict reads the tail of the product trace: near-flat counts as
/// stabilising, a persistent geometric drop below half the initial value
/// as vanishing.
pub fn szego_condition(g: &VerblunskyFamily, horizons: &[Word]) -> Result<ConditionReport> {
    let mut rows = Vec::with_capacity(horizons.len());
    for upto in horizons {
        let ps = g.product_and_sum(upto)?;
        rows.push(ConditionRow {
            upto: upto.clone(),
            square_sum: ps.square_sum,
            product: ps.partial_product,
        });
    }
    let verdict = match rows.as_slice() {
        [.., a, b] => {
            let rel_step = (a.product - b.product).abs() / a.product.max(f64::MIN_POSITIVE);
            if rel_step < 1e-6 {
                Trend::ProductStabilizing
            } else if b.product < 0.5 * rows[0].product && b.product < 0.99 * a.product {
                Trend::ProductVanishing
            } else {
                Trend::Inconclusive
            }
        }
        _ => Trend::Inconclusive,
    };
    Ok(ConditionReport { rows, verdict })
}
