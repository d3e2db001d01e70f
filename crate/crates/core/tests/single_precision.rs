use halfcycle_core::cycle::LabeledCycle;
use halfcycle_core::ensemble::{nu_from_y, FftNu, YSample};
use halfcycle_core::{halfstep_profile_periodic, minimal_periodic_spectrum, nu_of, overlap_at, Profile32};

#[test]
fn profile_in_f32_tracks_f64() {
    for p in [8, 64, 256] {
        let single: Profile32 = halfstep_profile_periodic(p).unwrap();
        let double = halfstep_profile_periodic::<f64>(p).unwrap();
        assert!((single.captured() - 1.0).abs() < 1e-4);
        for (a, b) in single.amplitudes().iter().zip(double.amplitudes()) {
            assert!(((a.re as f64) - b.re).abs() < 1e-4 && ((a.im as f64) - b.im).abs() < 1e-4);
        }
        // |a_j| is symmetric about j = (p + 1) / 2, so the two middle positions tie
        for peak in [single.peak().unwrap().0, double.peak().unwrap().0] {
            assert!(peak == p / 2 || peak == p / 2 + 1);
        }
    }
}

#[test]
fn kronecker_delta_in_f32() {
    let spec = minimal_periodic_spectrum::<f32>(16).unwrap();
    assert!((overlap_at(&spec, 0.0).unwrap().re - 1.0).abs() < 1e-6);
    for k in 1..16 {
        assert!(overlap_at(&spec, k as f32).unwrap().norm() < 1e-4);
    }
}

#[test]
fn fft_route_agrees_in_f32() {
    let p = 64;
    let window = LabeledCycle::centered_for_period(p).unwrap().window_indices();
    let y = YSample::<f32>::alternating(p).unwrap();
    let plan = FftNu::<f32>::new(p).unwrap();
    let mut buf = Vec::new();
    let fft = plan.nu(&y, &window, &mut buf).unwrap();
    let direct = nu_from_y(&y, &window).unwrap();
    let exact = nu_of(&halfstep_profile_periodic::<f64>(p).unwrap(), &window).unwrap();
    assert!((fft as f64 - exact).abs() < 1e-4);
    assert!((direct as f64 - exact).abs() < 1e-4);
}
