use sparsebound::classifiers::{make_grid, ColumnStats};
use sparsebound::datagen::{gen_column_stats, gen_pattern, Hypothesis, KChoice};
use sparsebound::model::ModelParams;
use sparsebound::rng::seeded;
use sparsebound::special::norm_sf;

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Under H0 the query is independent of the training data, so the selected
/// query sum has mean zero at every grid level.
#[test]
fn selected_query_sum_is_centered_under_null() {
    let p = ModelParams::from_x1(2048, 4, 0.6, 1.5);
    let grid = make_grid(&p).unwrap();
    let t_d = p.log_d().sqrt();
    let mut rng = seeded(12);
    let stats: Vec<ColumnStats> = (0..1000)
        .map(|_| {
            let pattern = gen_pattern(&p, KChoice::High, &mut rng).unwrap();
            gen_column_stats(&p, &pattern, Hypothesis::H0, &mut rng).unwrap()
        })
        .collect();
    for t in grid.points() {
        let level = t * t_d * p.sigma;
        let delta: Vec<f64> = stats
            .iter()
            .map(|s| {
                let sum: f64 = s.z.iter().zip(&s.sy).filter(|(_, &y)| y > level).map(|(z, _)| z).sum();
                sum / (p.sigma * (p.d as f64 * norm_sf(t * t_d)).sqrt())
            })
            .collect();
        let (mean, se) = mean_and_se(&delta);
        assert!(mean.abs() < 4.0 * se.max(1e-12), "t={t}: {mean} +- {se}");
    }
}

/// Exceedance counts over unshifted coordinates, centred by their
/// theoretical mean, average to zero.
#[test]
fn null_coordinate_counts_are_centered() {
    let p = ModelParams::from_x1(2048, 2, 0.6, 1.5);
    let grid = make_grid(&p).unwrap();
    let t_d = p.log_d().sqrt();
    let mut rng = seeded(13);
    let draws: Vec<(Vec<bool>, ColumnStats)> = (0..1000)
        .map(|_| {
            let pattern = gen_pattern(&p, KChoice::Low, &mut rng).unwrap();
            let s = gen_column_stats(&p, &pattern, Hypothesis::H0, &mut rng).unwrap();
            (pattern.bits().to_vec(), s)
        })
        .collect();
    for t in grid.points() {
        let level = t * t_d * p.sigma;
        let tail = norm_sf(t * t_d);
        let centred: Vec<f64> = draws
            .iter()
            .map(|(bits, s)| {
                let (mut count, mut nulls) = (0.0, 0.0);
                for (k, &on) in bits.iter().enumerate() {
                    if !on {
                        nulls += 1.0;
                        if s.sy[k] > level {
                            count += 1.0;
                        }
                    }
                }
                count - nulls * tail
            })
            .collect();
        let (mean, se) = mean_and_se(&centred);
        assert!(mean.abs() < 4.0 * se.max(1e-12), "t={t}: {mean} +- {se}");
    }
}
