use kdep_core::bounds::mean_dependence;
use kdep_core::montecarlo::{estimate_distribution, exhaustive_distribution, sample_matrix, sample_rng, SampleConfig, DEFAULT_SAMPLE_BUDGET};
use kdep_core::Field;

/// Chi-square statistic of column codes over the `q^r - 1` nonzero cells.
fn chi_square(q: u32, r: usize, draws: usize) -> (f64, usize) {
    let field = Field::new(q).unwrap();
    let cells = (q as usize).pow(r as u32) - 1;
    let mut counts = vec![0u64; cells];
    let per_sample = 10;
    for i in 0..draws / per_sample {
        let m = sample_matrix(&field, r, per_sample, &mut sample_rng(2024, i as u64));
        for code in m.encoded_columns() {
            assert!(code >= 1, "zero column drawn");
            counts[code as usize - 1] += 1;
        }
    }
    let expected = draws as f64 / cells as f64;
    let stat = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    (stat, cells - 1)
}

#[test]
fn columns_are_uniform_over_nonzero_vectors() {
    // upper 0.001 points of chi-square with 2, 7 and 23 degrees of freedom
    for (q, df, critical) in [(2, 2, 13.816), (3, 7, 24.322), (5, 23, 49.728)] {
        let (stat, cells_df) = chi_square(q, 2, 100_000);
        assert_eq!(cells_df, df);
        assert!(stat < critical, "q = {q}: chi-square {stat} >= {critical}");
    }
}

#[test]
fn sample_means_near_one_minus_pi() {
    for (q, r, s, k) in [(2, 2, 3, 0), (2, 3, 4, 1)] {
        let config = SampleConfig { q, r, s, k, trials: 100_000, seed: 7, workers: 1 };
        let dist = estimate_distribution(&config, DEFAULT_SAMPLE_BUDGET).unwrap();
        let mean = num_traits::ToPrimitive::to_f64(&dist.mean()).unwrap();
        let target = num_traits::ToPrimitive::to_f64(&mean_dependence(q, r, k).unwrap()).unwrap();
        // d lies in [0, 1], so its standard deviation is at most 1/2
        let sigma = 0.5 / (100_000f64).sqrt();
        assert!((mean - target).abs() <= 3.0 * sigma, "{q} {r} {s} {k}: {mean} vs {target}");
    }
}

#[test]
fn exhaustive_means_match_for_all_small_shapes() {
    for (q, r, s, k) in [(2, 2, 2, 0), (2, 2, 3, 1), (2, 3, 3, 0), (2, 3, 4, 1), (3, 2, 3, 0), (4, 2, 2, 0)] {
        let d = exhaustive_distribution(q, r, s, k, 1 << 22).unwrap();
        assert_eq!(d.mean(), mean_dependence(q, r, k).unwrap(), "q={q} r={r} s={s} k={k}");
    }
}
