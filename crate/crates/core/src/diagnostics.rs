//! Shape measurements on sampled radial profiles u(r).
//!
//! The front is the outermost run of significant samples with a common
//! sign; samples with |u| below `rel_threshold · max|u|` are ignored.

/// Index ranges [start, end) of the constant-sign runs of significant samples.
fn sign_runs(values: &[f64], rel_threshold: f64) -> Vec<(usize, usize, bool)> {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Vec::new();
    }
    let cut = rel_threshold * peak;
    let mut runs: Vec<(usize, usize, bool)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if v.abs() < cut {
            continue;
        }
        let positive = v > 0.0;
        match runs.last_mut() {
            Some(run) if run.2 == positive => run.1 = i + 1,
            _ => runs.push((i, i + 1, positive)),
        }
    }
    runs
}

/// Number of sign changes among significant samples strictly behind the
/// front lobe. The change at the lobe's own trailing edge is not counted.
pub fn sign_changes_behind_front(values: &[f64], rel_threshold: f64) -> usize {
    sign_runs(values, rel_threshold).len().saturating_sub(2)
}

/// The sample of largest modulus within the front lobe, as (r, u).
pub fn front_peak(radii: &[f64], values: &[f64], rel_threshold: f64) -> Option<(f64, f64)> {
    let &(start, end, _) = sign_runs(values, rel_threshold).last()?;
    (start..end)
        .max_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()))
        .map(|i| (radii[i], values[i]))
}

/// Full width at half maximum of the front lobe, with linear
/// interpolation of the half-maximum crossings.
pub fn front_width(radii: &[f64], values: &[f64], rel_threshold: f64) -> Option<f64> {
    let &(start, end, positive) = sign_runs(values, rel_threshold).last()?;
    let sign = if positive { 1.0 } else { -1.0 };
    let peak_idx = (start..end).max_by(|&a, &b| (sign * values[a]).total_cmp(&(sign * values[b])))?;
    let half = 0.5 * sign * values[peak_idx];
    let level = |i: usize| sign * values[i] - half;
    let crossing = |i: usize, j: usize| {
        let (a, b) = (level(i), level(j));
        radii[i] + (radii[j] - radii[i]) * a / (a - b)
    };
    let mut lo = peak_idx;
    while lo > 0 && level(lo - 1) > 0.0 {
        lo -= 1;
    }
    let left = if lo == 0 { radii[0] } else { crossing(lo - 1, lo) };
    let mut hi = peak_idx;
    while hi + 1 < values.len() && level(hi + 1) > 0.0 {
        hi += 1;
    }
    let right = if hi + 1 == values.len() {
        radii[hi]
    } else {
        crossing(hi, hi + 1)
    };
    Some(right - left)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_significant_sign_changes() {
        assert_eq!(sign_changes_behind_front(&[1.0, 0.5, 0.1], 1e-3), 0);
        assert_eq!(sign_changes_behind_front(&[-1.0, 1e-9, -0.5, 2.0, 0.0], 1e-3), 0);
        assert_eq!(sign_changes_behind_front(&[1.0, -1.0, 1.0, -1.0], 1e-3), 2);
        assert_eq!(sign_changes_behind_front(&[0.0, 0.0], 1e-3), 0);
    }

    #[test]
    fn width_of_a_gaussian() {
        let r: Vec<f64> = (0..4001).map(|i| i as f64 * 0.0025).collect();
        let u: Vec<f64> = r.iter().map(|x| (-(x - 5.0) * (x - 5.0) / 2.0).exp()).collect();
        let w = front_width(&r, &u, 1e-3).unwrap();
        let exact = 2.0 * (2.0 * 2f64.ln()).sqrt();
        assert!((w - exact).abs() < 1e-4);
        let (rp, up) = front_peak(&r, &u, 1e-3).unwrap();
        assert!((rp - 5.0).abs() < 1e-12 && (up - 1.0).abs() < 1e-12);
    }
}
