//! End-to-end orbit computations for the built-in wind-tree surfaces: orbit
//! sizes, Lyapunov exponent sums and the diffusion rates extracted from them.

use windtree_core::exact::rat;
use windtree_core::origami::{parse_origami, DifferentialKind, SingularityProfile};
use windtree_core::teichcurve::{
    lambda_plus_from_cover, orbit, sum_lyapunov, DEFAULT_ORBIT_BUDGET,
};
use windtree_core::windtree::{chessboard_table, unfold_to_origami, windtree_symmetries};

/// First 14-square surface: orbit sum 28/11, diffusion rate 20/33 through
/// the genus-1 halving over Q(1^4, -1^4).
#[test]
fn fourteen_square_surface_one() {
    let o = parse_origami(
        "14\nr=(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)\nu=(1,3,13,8,2,14)(4,6,11,5,10,12)(7,9)\n",
    )
    .unwrap();
    let profile = o.singularity_profile();
    assert_eq!(
        profile.label(DifferentialKind::Abelian),
        "H(2^4)",
        "unexpected stratum: {profile}"
    );
    let data = orbit(&o, DEFAULT_ORBIT_BUDGET).unwrap();
    let report = sum_lyapunov(&data, data.profile());
    println!(
        "surface one: orbit size {}, total {}",
        data.size(),
        report.total
    );
    let q = SingularityProfile::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
    let lambda = lambda_plus_from_cover(&report.total, &q).unwrap();
    assert_eq!(lambda, rat(20, 33));
}

/// Second 14-square surface: diffusion rate 6/11.
#[test]
fn fourteen_square_surface_two() {
    let o = parse_origami(
        "14\nr=(1,2,3,4,5,6,7,8)(9,10,11,12,13,14)\nu=(1,2,3,14,9)(4,13)(5,6,7,11,12)(8,10)\n",
    )
    .unwrap();
    let profile = o.singularity_profile();
    assert_eq!(
        profile.label(DifferentialKind::Abelian),
        "H(2^4)",
        "unexpected stratum: {profile}"
    );
    let data = orbit(&o, DEFAULT_ORBIT_BUDGET).unwrap();
    let report = sum_lyapunov(&data, data.profile());
    println!(
        "surface two: orbit size {}, total {}",
        data.size(),
        report.total
    );
    let q = SingularityProfile::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
    let lambda = lambda_plus_from_cover(&report.total, &q).unwrap();
    assert_eq!(lambda, rat(6, 11));
}

/// The 26-square quotient of the chessboard wind-tree: orbit sum 3088/1053,
/// deficit 2 over Q(1^6, -1^6), diffusion rate 491/1053.
#[test]
fn chessboard_quotient_orbit() {
    let unf = unfold_to_origami(&chessboard_table()).unwrap();
    let syms = windtree_symmetries(&unf).unwrap();
    let h_hat = unf
        .origami
        .quotient_by_translation_involution(&syms.tau_v)
        .unwrap();
    assert_eq!(h_hat.n(), 26);
    assert_eq!(
        h_hat.singularity_profile().label(DifferentialKind::Abelian),
        "H(2^6)"
    );
    println!("reconstructed r = {}", h_hat.r().cycle_string());
    println!("reconstructed u = {}", h_hat.u().cycle_string());
    let data = orbit(&h_hat, DEFAULT_ORBIT_BUDGET).unwrap();
    let report = sum_lyapunov(&data, data.profile());
    println!(
        "chessboard quotient: orbit size {}, kappa {}, mean {}, total {}",
        data.size(),
        report.kappa_abelian,
        report.mean_cylinder_sum,
        report.total
    );
    assert_eq!(report.total, rat(3088, 1053));
    let q = SingularityProfile::new(vec![1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1]).unwrap();
    let lambda = lambda_plus_from_cover(&report.total, &q).unwrap();
    assert_eq!(lambda, rat(491, 1053));
}
