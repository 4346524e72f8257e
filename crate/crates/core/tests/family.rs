use num_complex::Complex64 as C64;
use tristate::{
    family::{ self, FamilyParams },
    hilbert::{ Operator, Party, PartyPermutation },
    linalg,
    ppt::{ self, Threshold, DEFAULT_PSD_TOL },
    range::{ self, TGrid },
};

const TIGHT: f64 = 1e-12;

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

fn lmin(op: &Operator) -> f64 {
    op.spectrum().unwrap().min()
}

/* Independent oracles for real 8x8 qubit operators **************************/

type Real8 = [[f64; 8]; 8];

fn to_real(op: &Operator) -> Real8 {
    let mut m = [[0.0; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let z = op.matrix()[(i, j)];
            assert!(z.im.abs() < 1e-15);
            *x = z.re;
        }
    }
    m
}

/// Transpose the qubit at bit position `bit` (2 = A, 1 = B, 0 = C).
fn pt_bits(m: &Real8, bit: u32) -> Real8 {
    let mask = 1usize << bit;
    let mut out = [[0.0; 8]; 8];
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let (ii, jj) = ((i & !mask) | (j & mask), (j & !mask) | (i & mask));
            out[ii][jj] = x;
        }
    }
    out
}

/// Smallest eigenvalue of a real symmetric matrix by power iteration on
/// `s·I − M`, finished with a Rayleigh quotient.
fn power_lmin(m: &Real8) -> f64 {
    let s: f64 = m.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut v = [1.0, 0.3, -0.2, 0.7, 0.11, -0.5, 0.9, 0.25];
    for _ in 0..20_000 {
        let mut w = [0.0; 8];
        for i in 0..8 {
            w[i] = s * v[i] - (0..8).map(|j| m[i][j] * v[j]).sum::<f64>();
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w.map(|x| x / n);
    }
    (0..8).map(|i| v[i] * (0..8).map(|j| m[i][j] * v[j]).sum::<f64>()).sum()
}

/* chi and sigma *************************************************************/

#[test]
fn chi_is_npt_across_a_bc() {
    let chi = family::chi();
    let l = lmin(&chi.partial_transpose(Party::A));
    assert!(l < -1e-6);
    let oracle = power_lmin(&pt_bits(&to_real(&chi), 2));
    assert!((l - oracle).abs() < 1e-9, "{l} vs {oracle}");
    assert!((l - -0.088_290_6).abs() < 1e-6);
}

#[test]
fn partial_transpose_matches_bit_oracle() {
    let rho = family::rho2_b(0.37).unwrap();
    let m = to_real(&rho);
    for (party, bit) in [(Party::A, 2), (Party::B, 1), (Party::C, 0)] {
        let expect = pt_bits(&m, bit);
        let got = to_real(&rho.partial_transpose(party));
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(got[i][j], expect[i][j]);
            }
        }
    }
}

#[test]
fn sigma_routes_agree_on_grid() {
    for b in grid(101) {
        let d = family::sigma_b(b).unwrap().max_abs_diff(&family::sigma_b_matrix(b).unwrap());
        assert!(d <= TIGHT, "b = {b}: {d:e}");
    }
}

#[test]
fn sigma_cut_signs() {
    for b in grid(11) {
        assert!(lmin(&family::sigma_b(b).unwrap().partial_transpose(Party::A)) >= -DEFAULT_PSD_TOL);
    }
    for b in [0.2, 0.5, 0.9] {
        let sigma = family::sigma_b(b).unwrap();
        for p in [Party::B, Party::C] {
            let l = lmin(&sigma.partial_transpose(p));
            assert!(l < -1e-6, "b = {b}, {p}: {l}");
            let oracle = power_lmin(&pt_bits(&to_real(&sigma), if p == Party::B { 1 } else { 0 }));
            assert!((l - oracle).abs() < 1e-8);
        }
    }
}

/* eta ***********************************************************************/

#[test]
fn eta_is_cyclically_symmetric_and_full_rank() {
    let cyc = PartyPermutation::cyclic();
    for b in [0.0, 0.3, 0.9, 1.0] {
        let eta = family::eta_b(b).unwrap();
        assert!(eta.permute_parties(&cyc).max_abs_diff(&eta) < TIGHT);
    }
    let eta = family::eta_b(0.9).unwrap();
    assert_eq!(eta.spectrum().unwrap().rank(1e-9), 8);
    for p in Party::ALL {
        assert_eq!(eta.partial_transpose(p).spectrum().unwrap().rank(1e-9), 8);
    }
}

/// Measured lower end of the interval on which `η^(b)` is PPT on every cut.
const ETA_PPT_FROM: f64 = 0.511_710_897_508_019_1;

#[test]
fn eta_ppt_interval_baseline() {
    for p in Party::ALL {
        let t = ppt::ppt_threshold(family::eta_b, p, (0.0, 1.0), 1e-12, DEFAULT_PSD_TOL).unwrap();
        let root = t.root().expect("sign change");
        assert!((root - ETA_PPT_FROM).abs() < 1e-9, "{p}: {root}");
    }
    for b in grid(101).into_iter().filter(|&b| b > ETA_PPT_FROM + 1e-6) {
        let eta = family::eta_b(b).unwrap();
        assert!(ppt::ppt_report(&eta, DEFAULT_PSD_TOL).unwrap().all_ppt(), "b = {b}");
    }
    let below = family::eta_b(ETA_PPT_FROM - 1e-3).unwrap();
    assert!(!ppt::ppt_report(&below, DEFAULT_PSD_TOL).unwrap().all_ppt());
}

/* h and rho2 ****************************************************************/

#[test]
fn rho2_is_a_state_and_ppt_on_a() {
    for b in grid(101) {
        let rho = family::rho2_b(b).unwrap();
        assert!((rho.trace() - 1.0).abs() <= TIGHT, "b = {b}");
        assert!(lmin(&rho) >= -DEFAULT_PSD_TOL, "b = {b}");
        let la = lmin(&rho.partial_transpose(Party::A));
        assert_eq!(la >= -DEFAULT_PSD_TOL, b > RHO2_A_THRESHOLD, "b = {b}: {la:e}");
        let theta = FamilyParams::new(b).unwrap().theta;
        assert!((theta * family::h_b(b).unwrap().trace() - 1.0).abs() <= TIGHT);
    }
    assert!(lmin(&family::h_b(0.5).unwrap()) >= -1e-10);
    for b in [0.0, 0.3, 0.8184, 1.0] {
        assert!((family::rho2_b(b).unwrap().trace() - 1.0).abs() <= TIGHT);
    }
}

#[test]
fn rho2_routes_agree_on_grid() {
    for b in grid(101) {
        let built = family::rho2_b(b).unwrap();
        let printed = family::rho2_matrix(b).unwrap();
        assert!(built.max_abs_diff(&printed) <= TIGHT, "b = {b}");
        let ptc = family::rho2_ptc_matrix(b).unwrap();
        assert!(built.partial_transpose(Party::C).max_abs_diff(&ptc) <= TIGHT, "b = {b}");
        assert!(printed.partial_transpose(Party::C).max_abs_diff(&ptc) <= TIGHT, "b = {b}");
    }
}

#[test]
fn rho2_matrix_corner_and_zero_limit() {
    let b = 0.9;
    let p = FamilyParams::new(b).unwrap();
    let m = family::rho2_matrix(b).unwrap();
    assert!((m.matrix()[(0, 0)].re / p.theta - p.gamma).abs() < 1e-15);

    let p0 = FamilyParams::new(0.0).unwrap();
    assert_eq!((p0.gamma, p0.theta), (0.0, 1.0));
    assert!((p0.lambda - 1.0 / 6.0).abs() < 1e-16);
    assert!((p0.delta - 1.0 / 6.0).abs() < 1e-16);
    assert!((p0.zeta - 0.5).abs() < 1e-16);
    // Ω keeps its √(1−b²) term at b = 0
    assert!((p0.omega - 1.0 / 6.0).abs() < 1e-16);
    assert!(family::rho2_b(0.0).unwrap().max_abs_diff(&family::rho2_matrix(0.0).unwrap()) < TIGHT);
}

#[test]
fn rho2_range_pattern() {
    for b in grid(101) {
        let spec = family::rho2_b(b).unwrap().spectrum().unwrap();
        for v in spec.range_basis(1e-9) {
            assert!((v[1] - v[2]).norm() <= 1e-10, "b = {b}");
            assert!((v[5] - v[6]).norm() <= 1e-10, "b = {b}");
        }
    }
}

#[test]
fn rho2_cut_verdicts() {
    let r = ppt::ppt_report(&family::rho2_b(0.9).unwrap(), DEFAULT_PSD_TOL).unwrap();
    assert!(r.all_ppt());
    let r = ppt::ppt_report(&family::rho2_b(0.5).unwrap(), DEFAULT_PSD_TOL).unwrap();
    assert_eq!(r.cuts.map(|c| c.ppt), [true, false, false]);
}

#[test]
fn rho2_lmin_b_is_monotone_on_upper_half() {
    let values: Vec<f64> = (0..=50)
        .map(|k| 0.5 + 0.01 * k as f64)
        .map(|b| lmin(&family::rho2_b(b).unwrap().partial_transpose(Party::B)))
        .collect();
    for w in values.windows(2) {
        assert!(w[1] >= w[0] - 1e-14, "{w:?}");
    }
}

/* thresholds ****************************************************************/

/// Bisection root of `λ_min(PT_B)` for `ρ₂(b)`, kept as a regression value.
const RHO2_THRESHOLD: f64 = 0.817_340_857_717_499_6;

#[test]
fn rho2_thresholds() {
    let tb = ppt::ppt_threshold(family::rho2_b, Party::B, (0.0, 1.0), 1e-10, DEFAULT_PSD_TOL).unwrap();
    let tc = ppt::ppt_threshold(family::rho2_b, Party::C, (0.0, 1.0), 1e-10, DEFAULT_PSD_TOL).unwrap();
    let (rb, rc) = (tb.root().unwrap(), tc.root().unwrap());
    assert!((rb - RHO2_THRESHOLD).abs() < 1e-9, "{rb}");
    assert!((rb - rc).abs() < 1e-6);
    assert!(matches!(tb, Threshold::Root { bracket: (lo, hi), .. } if lo == 0.81 && hi == 0.82));
    // sign on either side, checked with the power-iteration oracle
    let below = power_lmin(&pt_bits(&to_real(&family::rho2_b(rb - 1e-4).unwrap()), 1));
    let above = power_lmin(&pt_bits(&to_real(&family::rho2_b(rb + 1e-4).unwrap()), 1));
    assert!(below < 0.0 && above > 0.0, "{below} {above}");
}

/// Below this `b`, `ρ₂(b)^{T_A}` has a negative eigenvalue; above it the
/// transpose is PSD with a kernel, so `λ_min` sits at round-off.
const RHO2_A_THRESHOLD: f64 = 0.359_987_754_6;

#[test]
fn rho2_party_a_threshold() {
    let t = ppt::ppt_threshold(family::rho2_b, Party::A, (0.0, 1.0), 1e-12, DEFAULT_PSD_TOL).unwrap();
    let root = t.root().expect("sign change");
    assert!((root - RHO2_A_THRESHOLD).abs() < 1e-9, "{root}");
    let below = power_lmin(&pt_bits(&to_real(&family::rho2_matrix(0.3).unwrap()), 2));
    assert!(below < -1e-2, "{below}");
    let t = ppt::ppt_threshold(family::rho2_b, Party::A, (0.4, 1.0), 1e-10, DEFAULT_PSD_TOL).unwrap();
    assert!(matches!(t, Threshold::NoSignChange { .. }), "{t:?}");
}

/* range criterion ***********************************************************/

#[test]
fn witness_lies_in_pt_c_range() {
    for b in (0..=18).map(|k| 0.82 + 0.01 * k as f64) {
        let pt = family::rho2_b(b).unwrap().partial_transpose(Party::C);
        let range = pt.spectrum().unwrap().range_basis(1e-9);
        let u = family::witness_u(b).unwrap();
        assert!(linalg::residual_outside_span(&u, &range).unwrap() <= 1e-8, "b = {b}");
    }
}

#[test]
fn endpoint_families_have_the_predicted_support() {
    let rho = family::rho2_b(0.9).unwrap();
    let v = range::range_criterion_ab_c(&rho, &TGrid::standard(), None).unwrap();
    let [first, second] = &v.endpoint_families[..] else { panic!() };
    assert_eq!(first.phi, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    assert_eq!(first.basis.len(), 2);
    assert_eq!(second.basis.len(), 2);
    // (A,0,D,0) for φ = (1,0) and (0,C,0,F) for φ = (0,1)
    for psi in &first.basis {
        assert!(psi[1].norm() < 1e-10 && psi[3].norm() < 1e-10);
    }
    for psi in &second.basis {
        assert!(psi[0].norm() < 1e-10 && psi[2].norm() < 1e-10);
    }
    // and both really give range vectors
    let range = rho.spectrum().unwrap().range_basis(1e-9);
    for fam in [first, second] {
        for psi in &fam.basis {
            let prod: Vec<C64> = psi.iter().flat_map(|a| [a * fam.phi[0], a * fam.phi[1]]).collect();
            assert!(linalg::residual_outside_span(&prod, &range).unwrap() < 1e-9);
        }
    }
}

#[test]
fn range_criterion_at_nine_tenths() {
    let rho = family::rho2_b(0.9).unwrap();
    let u = family::witness_u(0.9).unwrap();
    let v = range::range_criterion_ab_c(&rho, &TGrid::standard(), Some(&u)).unwrap();
    assert_eq!((v.range_dim, v.pt_range_dim, v.product_span_dim), (6, 8, 6));
    assert!(v.saturated);
    assert!(v.witness_pt_range_residual <= 1e-8);
    assert!(v.range_residual < 1e-9);
    // complex t recovers the whole of range(PT_C)
    assert_eq!(v.sampled_span_dim, 8);
    assert!(v.witness_residual < 1e-12);
    assert!(!v.violated);
}

/// Residual of `u(0.9)` outside `W` when `t` is restricted to the reals.
const REAL_ONLY_RESIDUAL: f64 = 0.346_852_015_624_679;

#[test]
fn real_t_grid_residual_baseline() {
    let rho = family::rho2_b(0.9).unwrap();
    let u = family::witness_u(0.9).unwrap();
    let v = range::range_criterion_ab_c(&rho, &TGrid::real_only(), Some(&u)).unwrap();
    assert_eq!(v.sampled_span_dim, 6);
    assert!((v.witness_residual - REAL_ONLY_RESIDUAL).abs() < 1e-10, "{}", v.witness_residual);
    assert!(v.violated);
}
