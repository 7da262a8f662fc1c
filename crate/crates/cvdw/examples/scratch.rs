use std::f64::consts::TAU;
use cvdw::KnotVector;

fn mean_of(k: &KnotVector) -> f64 { k.signed_mean() }

fn main() {
    // Reproduce the seed-2 draw: trial_rng(2, 0x6d65_6d62), min_gap 0.08, m in 1..=4
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
        2u64.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(0x6d65_6d62u64.wrapping_mul(0xd1b5_4a32_d192_ed03)),
    );
    let min_gap = 0.08;
    let knots = loop {
        let m = rng.random_range(1..=4usize);
        let mut pts: Vec<f64> = (0..2 * m).map(|_| rng.random_range(0.0..TAU)).collect();
        pts.sort_by(f64::total_cmp);
        let ok = pts.windows(2).all(|w| w[1] - w[0] >= min_gap)
            && pts[0] + TAU - pts[2 * m - 1] >= min_gap;
        if ok {
            if let Ok(k) = KnotVector::new(pts) {
                break k;
            }
        }
    };
    println!("knots: {:?}", knots.knots());
    println!("mean: {}", mean_of(&knots));
}
