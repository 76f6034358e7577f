use tra::ortho_polys::PolyFamily;
use tra::tra::*;

const TOL: f64 = 1e-10;

fn system(p: OdeParams, scenario: Scenario, branch: Branch, free: Option<f64>) -> TraSystem {
    let spec = resolve_basis(&p, scenario, branch, free).unwrap();
    TraSystem::new(&p, &spec).unwrap()
}

fn assert_pairing(sys: &TraSystem, pairing: &Pairing, len: usize) {
    let mm = pairing.max_mismatch(sys, len);
    assert!(mm < TOL, "{}: (s, t^2) mismatch {mm:e}", pairing.family.name());
    if !pairing.formal {
        let mt = pairing.max_t_mismatch(sys, len).unwrap();
        assert!(mt < TOL, "{}: signed t mismatch {mt:e}", pairing.family.name());
    }
}

#[test]
fn meixner_pollaczek_pairing() {
    let sys = system(OdeParams::laguerre(0.3, 0.4, 1.2, -0.5, 0.7), Scenario::A7a, Branch::Plus, None);
    let p = pair_meixner_pollaczek(&sys).unwrap();
    assert_pairing(&sys, &p, 16);
    let PolyFamily::MeixnerPollaczek { theta, .. } = p.family else { panic!() };
    let x = 4.0 * 1.2 - 0.16;
    assert!((theta.cos() - (x - 1.0) / (x + 1.0)).abs() < 1e-14);
}

#[test]
fn meixner_pairing() {
    let sys = system(OdeParams::laguerre(0.2, 1.5, 0.1, -0.4, 0.9), Scenario::A7a, Branch::Plus, None);
    let p = pair_meixner(&sys).unwrap();
    assert_pairing(&sys, &p, 16);
}

#[test]
fn krawtchouk_pairing_is_formal() {
    let sys = system(OdeParams::laguerre(0.0, 0.3, 0.7, -6.0, 0.4), Scenario::A7a, Branch::Minus, None);
    assert_eq!(sys.spec.nu, -5.0);
    let p = pair_krawtchouk(&sys).unwrap();
    assert!(p.formal);
    assert_pairing(&sys, &p, 16);
    assert!(sys.formal_coeff_sq(0).1 < 0.0);
}

#[test]
fn krawtchouk_a0_is_linear_in_k() {
    let theta = 0.37;
    for f in [krawtchouk_a0_printed, krawtchouk_a0_derived] {
        let d1 = f(1.0, 4, theta) - f(0.0, 4, theta);
        let d2 = f(3.0, 4, theta) - f(2.0, 4, theta);
        assert!((d1 - d2).abs() < 1e-13);
    }
}

#[test]
fn continuous_dual_hahn_pairing() {
    let sys = system(OdeParams::laguerre(0.5, 1.2, 0.11, 1.0, 0.4), Scenario::A7b, Branch::Plus, Some(0.8));
    let p = pair_continuous_dual_hahn(&sys).unwrap();
    assert_pairing(&sys, &p, 16);
    let PolyFamily::ContinuousDualHahn { tau, .. } = p.family else { panic!() };
    assert!((tau - 1.2).abs() < 1e-14);
    assert!((p.map.family_value() - (1.0 - 0.0625)).abs() < 1e-14);
}

#[test]
fn dual_hahn_pairing_is_formal() {
    let sys = system(OdeParams::laguerre(0.5, 1.2, 0.11, 1.0, 1.95), Scenario::A7b, Branch::Plus, Some(-5.0));
    let p = pair_dual_hahn(&sys).unwrap();
    assert!(p.formal);
    // τ + σ = −N−1 keeps the pair outside both admissible regions.
    assert!(p.family.validate().is_err());
    assert_pairing(&sys, &p, 4);
}

#[test]
fn new_h_pairing() {
    let sys = system(OdeParams::jacobi(0.5, 0.7, -0.2, -0.3, 2.0, 0.5), Scenario::B12a, Branch::Plus, None);
    let p = pair_new_h(&sys).unwrap();
    assert_pairing(&sys, &p, 16);
}

#[test]
fn new_g_pairing() {
    let sys = system(OdeParams::jacobi(0.5, 0.7, -0.2, -0.3, 0.3, 0.5), Scenario::B12a, Branch::Plus, None);
    assert!(pair_new_h(&sys).is_err());
    let p = pair_new_g(&sys).unwrap();
    assert_pairing(&sys, &p, 16);
}

#[test]
fn wilson_pairing_continuous_and_mixed() {
    let sys = system(OdeParams::jacobi(1.0, 0.5, -0.3, 1.5, 0.0, 2.0), Scenario::B12c, Branch::Plus, Some(0.7));
    let p = pair_wilson(&sys).unwrap();
    assert_pairing(&sys, &p, 16);
    let mixed = system(OdeParams::jacobi(1.0, 0.5, -0.3, 1.5, 0.0, -0.6), Scenario::B12c, Branch::Plus, Some(1.7));
    let p = pair_wilson(&mixed).unwrap();
    assert_pairing(&mixed, &p, 16);
}

#[test]
fn racah_pairing_is_formal() {
    let sys = system(OdeParams::jacobi(1.0, 0.5, -0.3, 1.5, 0.0, -1.0), Scenario::B12c, Branch::Plus, Some(-5.0));
    let p = pair_racah(&sys).unwrap();
    assert!(p.formal);
    assert_pairing(&sys, &p, 4);
}

#[test]
fn b13b_is_b13c_after_exchange() {
    let p = OdeParams::jacobi(0.8, 0.4, 1.1, -0.7, 0.0, 0.9);
    let spec_b = resolve_basis(&p, Scenario::B12b, Branch::Plus, Some(0.6)).unwrap();
    let sys_b = TraSystem::new(&p, &spec_b).unwrap();
    let (q, spec_c) = apply_b14(&p, &spec_b).unwrap();
    let sys_c = TraSystem::new(&q, &spec_c).unwrap();
    assert!((sys_b.z_raw() - sys_c.z_raw()).abs() < 1e-13);
    for n in 0..=10 {
        let (sb, tb) = sys_b.coeff(n).unwrap();
        let (sc, tc) = sys_c.coeff(n).unwrap();
        assert!((sb - sc).abs() < 1e-12 * sb.abs().max(1.0), "s at {n}");
        assert!((tb + tc).abs() < 1e-12 * tb.abs().max(1.0), "t at {n}");
    }
}

#[test]
fn b11_residuals_vanish() {
    for (mu, nu) in [(0.3, 1.7), (2.0, -0.4), (5.0, 5.0)] {
        for n in 0..12 {
            let (rb, rc) = check_identities_b11(mu, nu, n).unwrap();
            assert!(rb < 1e-12 && rc < 1e-12, "{mu} {nu} {n}: {rb} {rc}");
        }
    }
}
