use crate::rng::Stream;

use super::params::GwoRates;
use super::population::Individual;

/// Indices of the `k` fittest individuals, best first, ties to the lower index.
pub fn rank_leaders(population: &[Individual], k: usize) -> Vec<usize> {
    let f: Vec<f64> = population.iter().map(Individual::fitness_value).collect();
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// `ω_m = |X_m'| / Σ|X_m'|`, equal weights when every magnitude is zero.
pub fn reference_weights(magnitudes: &[f64]) -> Vec<f64> {
    let total: f64 = magnitudes.iter().sum();
    if total > 0.0 {
        magnitudes.iter().map(|m| m / total).collect()
    } else {
        vec![1.0 / magnitudes.len() as f64; magnitudes.len()]
    }
}

/// Continuous grey-wolf step towards the leaders.
///
/// For each leader `m` and dimension `j`, `draw(m, j)` supplies `(r1, r2)`;
/// then `A = 2a·r1 − a`, `C = 2·r2`, `d = |C·X_m − X|` and `X_m' = X_m − A·d`.
/// The result is `Σ ω_m X_m'` with magnitude-proportional weights, divided by
/// the leader count when `literal` is set.
pub fn reference_update_with<F>(
    wolf: &[f64],
    leaders: &[&[f64]],
    a: f64,
    literal: bool,
    mut draw: F,
) -> Vec<f64>
where
    F: FnMut(usize, usize) -> (f64, f64),
{
    let candidates: Vec<Vec<f64>> = leaders
        .iter()
        .enumerate()
        .map(|(m, leader)| {
            wolf.iter()
                .zip(leader.iter())
                .enumerate()
                .map(|(j, (&x, &xl))| {
                    let (r1, r2) = draw(m, j);
                    let big_a = 2.0 * a * r1 - a;
                    let c = 2.0 * r2;
                    let d = (c * xl - x).abs();
                    xl - big_a * d
                })
                .collect()
        })
        .collect();
    let magnitudes: Vec<f64> = candidates
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let weights = reference_weights(&magnitudes);
    let divisor = if literal { leaders.len() as f64 } else { 1.0 };
    (0..wolf.len())
        .map(|j| {
            candidates
                .iter()
                .zip(&weights)
                .map(|(v, w)| w * v[j])
                .sum::<f64>()
                / divisor
        })
        .collect()
}

/// [`reference_update_with`] drawing `r1, r2` from lanes `2(mD + j)` and
/// `2(mD + j) + 1` of `stream`.
pub fn gwo_reference_update(
    wolf: &[f64],
    leaders: &[&[f64]],
    a: f64,
    literal: bool,
    stream: &Stream,
) -> Vec<f64> {
    let d = wolf.len() as u32;
    reference_update_with(wolf, leaders, a, literal, |m, j| {
        let lane = 2 * (m as u32 * d + j as u32);
        (stream.uniform(lane), stream.uniform(lane + 1))
    })
}

/// Discrete four-leader update of one wolf. Returns the new genome, already
/// on ±1 so genome and projection agree.
///
/// Per dimension `j` (lanes `4j..4j+3` of `stream`):
/// * with probability `p_sl`, copy the state of a uniformly chosen leader;
/// * otherwise, in the early phase, take a uniformly random state with
///   probability `p_dist`, else `+1` with probability equal to the fraction
///   of leaders at `+1`;
/// * in the late phase, take the leaders' majority state (keeping the wolf's
///   own state on a tie), then flip it with probability `p_flip`.
pub fn gwo_discrete_update(
    wolf: &[i8],
    leaders: &[&[i8]],
    rates: &GwoRates,
    stream: &Stream,
) -> Vec<f64> {
    let k = leaders.len();
    debug_assert!(k > 0);
    (0..wolf.len())
        .map(|j| {
            let lane = 4 * j as u32;
            let state: i8 = if stream.uniform(lane) < rates.p_sl {
                leaders[stream.index(lane + 1, k)][j]
            } else {
                let plus = leaders.iter().filter(|l| l[j] > 0).count();
                if !rates.late {
                    if stream.uniform(lane + 1) < rates.p_dist {
                        if stream.uniform(lane + 2) < 0.5 {
                            1
                        } else {
                            -1
                        }
                    } else if stream.uniform(lane + 3) < plus as f64 / k as f64 {
                        1
                    } else {
                        -1
                    }
                } else {
                    let majority = match (2 * plus).cmp(&k) {
                        std::cmp::Ordering::Greater => 1,
                        std::cmp::Ordering::Less => -1,
                        std::cmp::Ordering::Equal => wolf[j],
                    };
                    if stream.uniform(lane + 1) < rates.p_flip {
                        -majority
                    } else {
                        majority
                    }
                }
            };
            f64::from(state)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::FitnessValue;
    use crate::rng::Phase;

    fn ranked(f: &[f64]) -> Vec<Individual> {
        f.iter()
            .map(|&v| {
                let mut i = Individual::new(vec![0.0]);
                i.set_fitness(FitnessValue(v));
                i
            })
            .collect()
    }

    #[test]
    fn leader_ranking() {
        assert_eq!(
            rank_leaders(&ranked(&[5.0, 9.0, 1.0, 7.0, 7.0]), 4),
            vec![1, 3, 4, 0]
        );
        assert_eq!(
            rank_leaders(&ranked(&[2.0, 4.0, 3.0, 1.0]), 4),
            vec![1, 2, 0, 3]
        );
        assert_eq!(rank_leaders(&ranked(&[1.0; 6]), 4), vec![0, 1, 2, 3]);
    }

    #[test]
    fn weights() {
        assert_eq!(reference_weights(&[1.0, 1.0, 2.0]), vec![0.25, 0.25, 0.5]);
        assert_eq!(reference_weights(&[0.0; 3]), vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn a_zero_c_one_gives_weighted_leader_mean() {
        let l1 = [1.0, 0.0];
        let l2 = [0.0, 2.0];
        let l3 = [-2.0, 0.0];
        let out =
            reference_update_with(&[5.0, 5.0], &[&l1, &l2, &l3], 0.0, false, |_, _| (0.3, 0.5));
        // magnitudes 1, 2, 2
        let want = [0.2 * 1.0 + 0.4 * 0.0 + 0.4 * -2.0, 0.4 * 2.0];
        assert!((out[0] - want[0]).abs() < 1e-15 && (out[1] - want[1]).abs() < 1e-15);
    }

    #[test]
    fn one_dimensional_hand_example() {
        // a = 1, r1 = r2 = 0.5: A = 0, C = 1, so X_m' = X_m.
        // X = 0.3, leaders 0.9, -0.4, 0.2 -> weights 0.6, 0.2667, 0.1333
        // sum = (0.81 - 0.16 + 0.04) / 1.5 = 0.46
        let out = reference_update_with(&[0.3], &[&[0.9], &[-0.4], &[0.2]], 1.0, false, |_, _| {
            (0.5, 0.5)
        });
        assert!((out[0] - 0.46).abs() < 1e-15, "{}", out[0]);
        // r1 = 1, r2 = 0.5, a = 1: A = 1, d_m = |X_m − X|
        // X1' = 0.9 − 0.6 = 0.3, X2' = −0.4 − 0.7 = −1.1, X3' = 0.2 − 0.1 = 0.1
        // weights 0.3/1.5, 1.1/1.5, 0.1/1.5 -> (0.09 − 1.21 + 0.01) / 1.5 = −0.74
        let out = reference_update_with(&[0.3], &[&[0.9], &[-0.4], &[0.2]], 1.0, false, |_, _| {
            (1.0, 0.5)
        });
        assert!((out[0] + 0.74).abs() < 1e-15, "{}", out[0]);
        let literal =
            reference_update_with(&[0.3], &[&[0.9], &[-0.4], &[0.2]], 1.0, true, |_, _| {
                (1.0, 0.5)
            });
        assert!((literal[0] + 0.74 / 3.0).abs() < 1e-15);
    }

    fn rates(p_dist: f64, p_sl: f64, p_flip: f64, late: bool) -> GwoRates {
        GwoRates {
            p_dist,
            p_sl,
            p_flip,
            late,
        }
    }

    #[test]
    fn unanimous_late_no_noise() {
        let up = [1i8; 8];
        let leaders: [&[i8]; 4] = [&up, &up, &up, &up];
        let s = Stream::new(1, Phase::GwoDiscrete, 1, 1);
        let out = gwo_discrete_update(&[-1; 8], &leaders, &rates(0.0, 0.0, 0.0, true), &s);
        assert!(out.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn late_tie_keeps_own_state() {
        let up = [1i8; 2];
        let down = [-1i8; 2];
        let leaders: [&[i8]; 4] = [&up, &down, &up, &down];
        let s = Stream::new(1, Phase::GwoDiscrete, 1, 1);
        let out = gwo_discrete_update(&[-1, 1], &leaders, &rates(0.0, 0.0, 0.0, true), &s);
        assert_eq!(out, vec![-1.0, 1.0]);
    }
}
