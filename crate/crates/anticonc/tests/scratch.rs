use anticonc::pop::*;
use anticonc::scaling::*;
#[test]
fn scratch() {
    for &(x, eta) in
        &[(0.5, 0.5), (1.0, 0.5), (2.0, 0.5), (4.0, 0.5), (2.0, 0.2), (0.2, 0.1), (1e-3, 4.0), (1e-3, 8.0), (1e-2, 4.0), (1e-2, 8.0)]
    {
        let p = ScalingPoint::new(x, eta).unwrap();
        match pop_prediction(p, &PopOptions::default()) {
            Ok(pr) => {
                let m = pr.model().unwrap();
                println!("x {x} eta {eta}: s2 {:.4} c {:?} clip {:.2e}", m.sigma * m.sigma, m.coeffs, m.clipped_mass);
            }
            Err(e) => println!("x {x} eta {eta}: {e}"),
        }
        if x < 0.1 {
            let m = rescaled_moments(3, p).unwrap();
            println!("   moments {m:?}");
        }
    }
}
