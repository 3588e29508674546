use holgerm::conformal::*;
use num_complex::Complex64;

fn main() {
    let d = SlitDomain::new(0.3, 1.0, 2).unwrap();
    let f = q_slit_uniformizer(&d).unwrap();
    // Inverse at points near the negative real axis (window boundary).
    for im in [1e-16, 1e-12, 1e-8, 0.0, -1e-16] {
        let w = Complex64::new(-0.2, im);
        let z = f.eval_inverse(w).unwrap();
        println!("w = (-0.2, {im:+.1e}) -> z = {z:.6}");
    }
    // And the exact from_polar(eps, pi) style point.
    let w = Complex64::from_polar(0.2, std::f64::consts::PI);
    println!("from_polar pi: w = {w:?} -> {:?}", f.eval_inverse(w).unwrap());
    // forward at points near negative axis inside inner disk
    for im in [1e-12, 0.0, -1e-12] {
        let z = Complex64::new(-0.2, im);
        let w = f.eval(z).unwrap();
        println!("F(-0.2,{im:+.0e}) = {w:.6}");
    }
}
