use holgerm::conformal::*;
use holgerm::qz::CyclicTower;
use num_complex::Complex64;

fn main() {
    let tower = CyclicTower::new(vec![2, 4, 8]).unwrap();
    let levels = tower_build(&tower, 0.3, 3).unwrap();
    let l2 = &levels[1];
    println!("level 2: q={} eps={} eps0={}", l2.q, l2.eps, l2.eps0);
    for (j, &z) in l2.endpoints.iter().enumerate() {
        let img = l2.germ.eval(z).unwrap();
        println!("j={j} z={z:.6} f(z)={img:.6} z_next={:.6} dist={:.3e}",
            l2.endpoints[(j+1)%l2.endpoints.len()],
            (img - l2.endpoints[(j+1)%l2.endpoints.len()]).norm());
    }
    // Is f_2 rigid in h_2 coordinates?
    let h2 = &l2.uniformizer;
    let w = Complex64::new(0.05, 0.02);
    let z = h2.eval_inverse(w).unwrap();
    let fz = l2.germ.eval(z).unwrap();
    let w2 = h2.eval(fz).unwrap();
    let rot = w * Complex64::from_polar(1.0, std::f64::consts::TAU / 4.0);
    println!("h2 f2 h2^-1 check: w2={w2:.8} expected={rot:.8} dist={:.3e}", (w2-rot).norm());
}
