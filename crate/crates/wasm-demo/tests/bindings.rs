use coulomb_wasm_demo::{curves, errors, phase_map, CURVE_WIDTH, ERROR_WIDTH, PHASE_WIDTH};

#[test]
fn curves_rows_and_agreement() {
    let out = curves(2.0, 0.0, 10.0, 0.0, 25.0, 60.0, 8, 0.0);
    assert_eq!(out.len(), 8 * CURVE_WIDTH);
    for row in out.chunks(CURVE_WIDTH) {
        let amplitude = row[5].hypot(row[6]);
        assert!((row[1] - row[5]).abs() <= 0.03 * amplitude, "{row:?}");
        assert!((row[2] - row[6]).abs() <= 0.03 * amplitude, "{row:?}");
    }
}

#[test]
fn errors_are_small_on_the_first_figure() {
    let out = errors(2.0, 0.0, 10.0, 0.0, 1.0, 60.0, 30, 0.0);
    assert_eq!(out.len(), 30 * ERROR_WIDTH);
    let mut f: Vec<f64> = out.chunks(ERROR_WIDTH).map(|r| r[1]).collect();
    f.sort_by(f64::total_cmp);
    assert!(f[15] < 0.03);
}

#[test]
fn phase_map_is_real_and_signed() {
    let out = phase_map(0.0, 0.0, -0.9, 3.0, 40);
    assert_eq!(out.len(), 40 * PHASE_WIDTH);
    for row in out.chunks(PHASE_WIDTH) {
        assert!(row[2].abs() <= 1e-12 * row[1].abs().max(1.0));
        assert!(row[1] * row[0] >= 0.0);
        assert!(row[3] > 0.0);
    }
}

#[test]
fn failures_become_nan() {
    let out = curves(0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 2, 0.0);
    assert!(out[1].is_nan());
    assert!(!out[5].is_nan());
}
