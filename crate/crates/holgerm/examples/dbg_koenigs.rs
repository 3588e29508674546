use holgerm::jet::JetSeries;
use holgerm::linearize::{conjugacy_residual, koenigs_linearize, LinearizeOptions};
use num_complex::Complex64;

fn main() {
    let alpha = (5.0f64.sqrt() - 1.0) / 2.0;
    let lambda = Complex64::from_polar(1.0, std::f64::consts::TAU * alpha);
    for n in [8, 16, 24, 32] {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[0] = lambda;
        coeffs[1] = Complex64::new(1.0, 0.0);
        let f = JetSeries::new(coeffs).unwrap();
        let lin = koenigs_linearize(&f, &LinearizeOptions::default()).unwrap();
        let res = conjugacy_residual(&f, &lin).unwrap();
        println!("N={n:2}  max|h| = {:9.3e}  residual = {:9.3e}", lin.h.max_coeff_modulus(), res);
    }
    // Hyperbolic band |lambda| in [0.2, 0.9]: worst-case scan.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64; let mut worst_h = 0.0f64;
    for _ in 0..200 {
        let r = 0.2 + 0.7 * rng.gen::<f64>();
        let theta = std::f64::consts::TAU * rng.gen::<f64>();
        let mut coeffs: Vec<Complex64> = (0..32).map(|_| {
            let rr = rng.gen::<f64>().sqrt();
            let tt = std::f64::consts::TAU * rng.gen::<f64>();
            Complex64::from_polar(rr, tt)
        }).collect();
        coeffs[0] = Complex64::from_polar(r, theta);
        let f = JetSeries::new(coeffs).unwrap();
        let lin = koenigs_linearize(&f, &LinearizeOptions::default()).unwrap();
        let res = conjugacy_residual(&f, &lin).unwrap();
        worst = worst.max(res);
        worst_h = worst_h.max(lin.h.max_coeff_modulus());
    }
    println!("hyperbolic 200 germs: worst residual {worst:.3e}, worst max|h| {worst_h:.3e}");
}
