use dpbandit_core::bounds::bernoulli_gaps;
use dpbandit_core::{bernoulli_kl, kl_upper_inverse, laplace_sample, LaplaceScale, RngStream, SeededRng, Substream};

const DRAWS: u32 = 100_000;

fn private_mean(mu: f64, n: u32, eps: f64, rng: &mut RngStream) -> f64 {
    let hits = (0..n).filter(|_| rng.open01() < mu).count();
    let scale = LaplaceScale::for_sensitivity(1.0 / f64::from(n), eps).unwrap();
    hits as f64 / f64::from(n) + laplace_sample(scale, rng)
}

fn slack(p: f64) -> f64 {
    3.0 * (p * (1.0 - p) / f64::from(DRAWS)).sqrt()
}

// Hoeffding for the mean plus a Laplace tail of delta / 2.
#[test]
fn hoeffding_laplace_bounds_fail_at_most_one_and_a_half_delta() {
    let eps = 1.0;
    let mut rng = SeededRng::new(5, 0).stream(Substream::Aux(0));
    for &mu in &[0.3, 0.5] {
        for &n in &[10u32, 100] {
            for &delta in &[0.1, 0.01] {
                let log = (1.0f64 / delta).ln();
                let width = (log / (2.0 * f64::from(n))).sqrt() + log / (eps * f64::from(n));
                let (mut over, mut under) = (0u32, 0u32);
                for _ in 0..DRAWS {
                    let m = private_mean(mu, n, eps, &mut rng);
                    over += u32::from(m + width <= mu);
                    under += u32::from(m - width >= mu);
                }
                let limit = 1.5 * delta + slack(1.5 * delta);
                for (name, c) in [("upper", over), ("lower", under)] {
                    let freq = f64::from(c) / f64::from(DRAWS);
                    assert!(freq <= limit, "{name} mu={mu} n={n} delta={delta}: {freq} > {limit}");
                }
            }
        }
    }
}

// Chernoff in KL form for the shifted, clipped mean.
#[test]
fn kl_bound_fails_at_most_one_and_a_half_delta() {
    let eps = 1.0;
    let mut rng = SeededRng::new(6, 0).stream(Substream::Aux(0));
    for &mu in &[0.3, 0.5] {
        for &n in &[10u32, 100] {
            for &delta in &[0.1, 0.01] {
                let log = (1.0f64 / delta).ln();
                let mut misses = 0u32;
                for _ in 0..DRAWS {
                    let m = private_mean(mu, n, eps, &mut rng);
                    let shifted = (m + log / (eps * f64::from(n))).clamp(0.0, 1.0);
                    misses += u32::from(kl_upper_inverse(shifted, log / f64::from(n)) <= mu);
                }
                let freq = f64::from(misses) / f64::from(DRAWS);
                let limit = 1.5 * delta + slack(1.5 * delta);
                assert!(freq <= limit, "mu={mu} n={n} delta={delta}: {freq} > {limit}");
            }
        }
    }
}

fn grid_oracle(mean: f64, mu_star: f64) -> (f64, f64) {
    let (mut d, mut tv) = (f64::INFINITY, f64::INFINITY);
    let mut i = 1u32;
    loop {
        let q = mu_star + f64::from(i) * 1e-5;
        if q > 1.0 {
            break;
        }
        d = d.min(bernoulli_kl(mean, q).unwrap());
        tv = tv.min((q - mean).abs());
        i += 1;
    }
    (d, tv)
}

#[test]
fn gaps_match_grid_search() {
    let mut rng = SeededRng::new(17, 0).stream(Substream::Aux(1));
    for _ in 0..100 {
        let k = 2 + (rng.next_u64() % 4) as usize;
        let means: Vec<f64> = (0..k).map(|_| 0.05 + 0.9 * rng.open01()).collect();
        let mu_star = means.iter().copied().fold(f64::MIN, f64::max);
        for (m, g) in means.iter().zip(bernoulli_gaps(&means, mu_star).unwrap()) {
            if g.gap == 0.0 {
                assert_eq!((g.d_inf, g.t_inf), (0.0, 0.0));
                continue;
            }
            let (d, tv) = grid_oracle(*m, mu_star);
            assert!((g.d_inf - d).abs() <= 1e-3, "d_inf {} vs {d}", g.d_inf);
            assert!((g.t_inf - tv).abs() <= 1e-3, "t_inf {} vs {tv}", g.t_inf);
        }
    }
}
