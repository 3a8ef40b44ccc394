//! Closed-form length bounds, evaluated in double precision.

pub const COLLAPSE_TO_STATE: &str = "(M-1)(L_W+n+1) - k ln M";
pub const STABLE_COLLAPSE: &str = "(M-1)(n+L_W+1) - k ln M + L_W";
pub const RESET_LST: &str = "(k-1)(n+L_W+1) - 2k ln((k+1)/2) + l_W";
pub const RESET_ONE_CLUSTER: &str = "2n^2 - 4n + 1 - 2(n-1) ln(n/2)";
pub const MIN_RANK: &str = "l_W + (k-t)(L_W+n+1) - tk ln(k/t)";
pub const CLUSTER_STABLE: &str = "2nk/t - n - 1 - k ln(k/t)";
pub const CLUSTER_STABLE_NONSYNC: &str = "n^2 - n - 1 - n ln(n/2)";
pub const TRIVIAL: &str = "0 (single state)";

/// `(M−1)(L_W+n+1) − k ln M`.
pub fn collapse_to_state(m: usize, max_len: usize, n: usize, k: usize) -> f64 {
    let m = m as f64;
    (m - 1.0) * (max_len + n + 1) as f64 - k as f64 * m.ln()
}

/// `(M−1)(n+L_W+1) − k ln M + L_W`.
pub fn stable_collapse(m: usize, max_len: usize, n: usize, k: usize) -> f64 {
    collapse_to_state(m, max_len, n, k) + max_len as f64
}

/// `(k−1)(n+L_W+1) − 2k ln((k+1)/2) + ℓ_W`.
pub fn reset_lst(k: usize, n: usize, max_len: usize, min_len: usize) -> f64 {
    let kf = k as f64;
    (kf - 1.0) * (n + max_len + 1) as f64 - 2.0 * kf * ((kf + 1.0) / 2.0).ln() + min_len as f64
}

/// `f(x) = 2x² − 4x + 1 − 2(x−1) ln(x/2)`.
pub fn f(x: f64) -> f64 {
    2.0 * x * x - 4.0 * x + 1.0 - 2.0 * (x - 1.0) * (x / 2.0).ln()
}

pub fn one_cluster_reset(n: usize) -> f64 {
    f(n as f64)
}

/// `ℓ_W + (k−t)(L_W+n+1) − t k ln(k/t)`.
pub fn min_rank(min_len: usize, k: usize, t: usize, max_len: usize, n: usize) -> f64 {
    let (kf, tf) = (k as f64, t as f64);
    min_len as f64 + (kf - tf) * (max_len + n + 1) as f64 - tf * kf * (kf / tf).ln()
}

/// `2nk/t − n − 1 − k ln(k/t)`.
pub fn cluster_stable(n: usize, k: usize, t: usize) -> f64 {
    let (nf, kf, tf) = (n as f64, k as f64, t as f64);
    2.0 * nf * kf / tf - nf - 1.0 - kf * (kf / tf).ln()
}

/// `n² − n − 1 − n ln(n/2)`.
pub fn cluster_stable_nonsync(n: usize) -> f64 {
    let nf = n as f64;
    nf * nf - nf - 1.0 - nf * (nf / 2.0).ln()
}

/// `Σ_{j=1}^{k−1} 1/min{j, k−j}`.
pub fn harmonic_min_sum(k: usize) -> f64 {
    (1..k).map(|j| 1.0 / j.min(k - j) as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_known_points() {
        assert_eq!(f(2.0), 1.0);
        assert!((f(4.0) - (17.0 - 6.0 * 2f64.ln())).abs() < 1e-12);
        assert!((f(4.0) - 12.841).abs() < 1e-3);
        assert_eq!(collapse_to_state(1, 5, 7, 3), 0.0);
        // C4 with its power set: k = 4, L_W = 3, l_W = 0.
        assert!((reset_lst(4, 4, 3, 0) - (24.0 - 8.0 * 2.5f64.ln())).abs() < 1e-12);
        assert!((min_rank(1, 2, 2, 2, 4) - 1.0).abs() < 1e-12);
        assert!((cluster_stable(4, 4, 1) - (27.0 - 4.0 * 4f64.ln())).abs() < 1e-12);
        assert_eq!(harmonic_min_sum(2), 1.0);
        assert_eq!(harmonic_min_sum(4), 2.5);
    }

    #[test]
    fn harmonic_sum_dominates_log() {
        for k in 2..=64 {
            let lhs = harmonic_min_sum(k);
            let rhs = 2.0 * ((k as f64 + 1.0) / 2.0).ln();
            assert!(lhs >= rhs, "k = {k}: {lhs} < {rhs}");
        }
    }

    #[test]
    fn f_is_increasing_and_dominates_square() {
        for x in 2..=64 {
            let x = x as f64;
            assert!(f(x + 1.0) > f(x));
            assert!((x - 1.0) * (x - 1.0) <= f(x));
        }
    }
}
