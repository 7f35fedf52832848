//! Equal error rate of a toy verification system: same-speaker trials score
//! around 0.8, different-speaker trials around 0.4.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use tinyvox::embed::compute_eer;

fn main() -> tinyvox::Result<()> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
    let mut draw =
        |centre: f64, n: usize| -> Vec<f64> { (0..n).map(|_| centre + (rng.random::<f64>() - 0.5) * 0.6).collect() };
    let genuine = draw(0.8, 200);
    let impostor = draw(0.4, 600);

    let r = compute_eer(&genuine, &impostor)?;
    println!("EER {:.2} % at threshold {:.4}", r.eer * 100.0, r.threshold);
    for ((t, far), (_, frr)) in r.far_curve.iter().zip(&r.frr_curve).step_by(80) {
        println!("t={t:.3} FAR={far:.3} FRR={frr:.3}");
    }
    Ok(())
}
