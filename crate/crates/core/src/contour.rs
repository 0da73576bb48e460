//! Continuation of the uniform approximation along complex-`ρ` paths.
//!
//! The closed forms for `φ` are built from principal-branch elementary
//! functions, so evaluated pointwise they jump wherever an argument crosses a
//! cut. Along a path the sheet of every multi-valued term is carried in a
//! [`BranchState`]: when a term's argument crosses its cut between two
//! consecutive points, its winding moves by one in whichever direction keeps
//! the term continuous. Where `Re x` changes sign, the other closed form takes
//! over and the outer `2/3` power is re-matched to the previous `φ`.
//!
//! Every step is checked for continuity of `φ`, `φ'` and `φ'^{1/2}`; a
//! failed step is bisected, and a step that still fails after repeated
//! bisection is an error rather than a silent jump.

use num_complex::Complex64;

use crate::complexops::{branch_sqrt, BranchedFn};
use crate::coulomb::{check_rho, ComplexParams, CoulombQuad};
use crate::error::{CoulombError, Result};
use crate::wkb::{
    assemble, inner_roots, invert_phase, jet_from_phi, near_zero_threshold, outer_terms, phase_integral, phi_series,
    source, turning_geometry, BranchState, PhiJet, Region, Slot, TurningGeometry,
};

/// Bisection depth before a step is declared too large.
const MAX_REFINEMENT: u32 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub points: Vec<Complex64>,
    pub max_step: f64,
}

impl ContourPath {
    /// Rejects points on the cut ray and segments that cross it.
    pub fn new(points: Vec<Complex64>, max_step: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(CoulombError::Domain("empty contour".into()));
        }
        if !(max_step > 0.0) {
            return Err(CoulombError::Domain(format!("max_step must be positive, got {max_step}")));
        }
        for &p in &points {
            check_rho(p)?;
        }
        for w in points.windows(2) {
            if crosses_cut_ray(w[0], w[1]) {
                return Err(CoulombError::PathThroughSingularity { start: w[0], end: w[1] });
            }
        }
        Ok(ContourPath { points, max_step })
    }

    /// Straight segments through the given vertices, with the default step
    /// `|ρ_t|/50` for the given parameters.
    pub fn through(ell: Complex64, eta: Complex64, vertices: Vec<Complex64>) -> Result<Self> {
        let max_step = default_max_step(ell, eta, vertices[0])?;
        ContourPath::new(vertices, max_step)
    }

    /// `count` points on the ray `arg ρ = arg` from `|ρ| = r0` to `r1`.
    pub fn radial(arg: f64, r0: f64, r1: f64, count: usize, max_step: f64) -> Result<Self> {
        let pts = (0..count)
            .map(|k| {
                let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                Complex64::from_polar(r0 + (r1 - r0) * t, arg)
            })
            .collect();
        ContourPath::new(pts, max_step)
    }

    /// Closed rectangle `lo → (hi.re, lo.im) → hi → (lo.re, hi.im) → lo`.
    pub fn rectangle(lo: Complex64, hi: Complex64, max_step: f64) -> Result<Self> {
        let pts = vec![
            lo,
            Complex64::new(hi.re, lo.im),
            hi,
            Complex64::new(lo.re, hi.im),
            lo,
        ];
        ContourPath::new(pts, max_step)
    }

    pub fn reversed(&self) -> ContourPath {
        let mut points = self.points.clone();
        points.reverse();
        ContourPath { points, max_step: self.max_step }
    }

    /// The points with extra ones inserted so that no gap exceeds `max_step`.
    pub fn refined(&self) -> Vec<Complex64> {
        let mut out = vec![self.points[0]];
        for w in self.points.windows(2) {
            let pieces = ((w[1] - w[0]).norm() / self.max_step).ceil().max(1.0) as usize;
            for k in 1..=pieces {
                out.push(w[0] + (w[1] - w[0]) * (k as f64 / pieces as f64));
            }
        }
        out
    }
}

/// `|ρ_t|/50`.
pub fn default_max_step(ell: Complex64, eta: Complex64, rho: Complex64) -> Result<f64> {
    let geo = turning_geometry(&ComplexParams::new(ell, eta, rho)?)?;
    Ok(geo.rho_t.norm() / 50.0)
}

fn crosses_cut_ray(a: Complex64, b: Complex64) -> bool {
    if (a.im < 0.0 && b.im > 0.0) || (a.im > 0.0 && b.im < 0.0) {
        let s = a.im / (a.im - b.im);
        return a.re + s * (b.re - a.re) <= 0.0;
    }
    false
}

/// One evaluated point of a continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub rho: Complex64,
    pub quad: CoulombQuad,
    pub sheets: BranchState,
    pub jet: PhiJet,
}

/// Arguments of the multi-valued terms and the pieces needed to judge
/// continuity at one point.
#[derive(Debug, Clone, Copy)]
struct Node {
    rho: Complex64,
    x: Complex64,
    sheets: BranchState,
    jet: PhiJet,
    /// `3S/2`, argument of the outer power; `None` inside the series disc.
    power_arg: Option<Complex64>,
    amplitude: Complex64,
}

/// `F`, `F'`, `G`, `G'` at every point of the refined path, continued from
/// principal sheets at the first point.
pub fn continue_quad(ell: Complex64, eta: Complex64, path: &ContourPath) -> Result<Vec<CoulombQuad>> {
    Ok(continue_path(ell, eta, path)?.into_iter().map(|p| p.quad).collect())
}

/// As [`continue_quad`], also reporting the sheets and phase jet per point.
pub fn continue_path(ell: Complex64, eta: Complex64, path: &ContourPath) -> Result<Vec<ContourPoint>> {
    let points = path.refined();
    let params = ComplexParams::new(ell, eta, points[0])?;
    let geo = turning_geometry(&params)?;
    let mut node = start_node(&geo, points[0])?;
    let mut out = vec![finish(&geo, &node)?];
    for &next in &points[1..] {
        node = advance(&geo, &node, next, 0)?;
        out.push(finish(&geo, &node)?);
    }
    Ok(out)
}

fn finish(geo: &TurningGeometry, node: &Node) -> Result<ContourPoint> {
    let local = TurningGeometry { x: node.x, ..*geo };
    let quad = assemble(&local, &node.jet, node.sheets.amplitude_root)?;
    Ok(ContourPoint { rho: node.rho, quad, sheets: node.sheets, jet: node.jet })
}

fn x_of(geo: &TurningGeometry, rho: Complex64) -> Complex64 {
    (rho - geo.rho_t) / geo.rho_t
}

fn start_node(geo: &TurningGeometry, rho: Complex64) -> Result<Node> {
    let x = x_of(geo, rho);
    let sheets = BranchState::default();
    if x.norm() < near_zero_threshold(geo.a) {
        let jet = phi_series(x, geo.a);
        return Ok(Node { rho, x, sheets, jet, power_arg: None, amplitude: branch_sqrt(jet.dphi, 0)? });
    }
    let s = phase_integral(x, geo.a, Region::of(x), &sheets)?;
    let phi = signed(invert_phase(s, 0)?, Region::of(x));
    let jet = jet_from_phi(x, geo.a, phi, 0)?;
    Ok(Node { rho, x, sheets, jet, power_arg: Some(1.5 * s), amplitude: branch_sqrt(jet.dphi, 0)? })
}

fn signed(magnitude: Complex64, region: Region) -> Complex64 {
    match region {
        Region::NonNegative => magnitude,
        Region::Negative => -magnitude,
    }
}

/// Moves from `from` to `rho`, bisecting if a single step is not continuous.
fn advance(geo: &TurningGeometry, from: &Node, rho: Complex64, depth: u32) -> Result<Node> {
    match step(geo, from, rho) {
        Ok(node) => Ok(node),
        Err(CoulombError::StepTooLarge(_)) if depth < MAX_REFINEMENT => {
            let mid = (from.rho + rho) * 0.5;
            check_rho(mid)?;
            let half = advance(geo, from, mid, depth + 1)?;
            advance(geo, &half, rho, depth + 1)
        }
        Err(e) => Err(e),
    }
}

/// The winding after the argument of `f` crosses its cut going from `from`
/// to `to`, starting on winding `w`. Square roots flip by direction so that
/// the reverse crossing undoes the change; the other functions take the
/// neighbouring sheet on which their value moves least.
fn cross(f: BranchedFn, from: Complex64, to: Complex64, w: i32) -> Result<i32> {
    if f == BranchedFn::Sqrt {
        let downward = from.im > 0.0 || (from.im == 0.0 && to.im < 0.0);
        return Ok(if downward { w + 1 } else { w - 1 });
    }
    let before = f.eval(from, w)?.value;
    let down = f.eval(to, w - 1)?.value;
    let up = f.eval(to, w + 1)?.value;
    Ok(if (down - before).norm() <= (up - before).norm() { w - 1 } else { w + 1 })
}

fn step(geo: &TurningGeometry, from: &Node, rho: Complex64) -> Result<Node> {
    check_rho(rho)?;
    let a = geo.a;
    let x = x_of(geo, rho);
    let mut sheets = from.sheets;

    let (jet, power_arg) = if x.norm() < near_zero_threshold(a) {
        (phi_series(x, a), None)
    } else {
        let region = Region::of(x);
        let handoff = from.power_arg.is_none() || Region::of(from.x) != region;
        let (phi, arg) = if handoff {
            rematch(x, a, region, &mut sheets, from.jet.phi)?
        } else {
            track(x, a, region, &mut sheets, from)?
        };
        let root0 = source(from.x, a) / from.jet.phi;
        let root1 = source(x, a) / phi;
        if from.jet.phi.norm() > 0.0 && BranchedFn::Sqrt.crosses_cut(root0, root1) {
            sheets.dphi_root = cross(BranchedFn::Sqrt, root0, root1, sheets.dphi_root)?;
        }
        (jet_from_phi(x, a, phi, sheets.dphi_root)?, Some(arg))
    };

    if BranchedFn::Sqrt.crosses_cut(from.jet.dphi, jet.dphi) {
        sheets.amplitude_root = cross(BranchedFn::Sqrt, from.jet.dphi, jet.dphi, sheets.amplitude_root)?;
    }
    let amplitude = branch_sqrt(jet.dphi, sheets.amplitude_root)?;

    let dx = (x - from.x).norm();
    let slope = from.jet.dphi.norm().max(jet.dphi.norm());
    let curve = from.jet.d2phi.norm().max(jet.d2phi.norm());
    let phi_ok = (jet.phi - from.jet.phi).norm() <= 3.0 * slope * dx + 1e-12 * (1.0 + jet.phi.norm());
    let dphi_ok = (jet.dphi - from.jet.dphi).norm() <= 3.0 * curve * dx + 0.25 * slope;
    let amp_ok = (amplitude - from.amplitude).norm() <= 0.5 * from.amplitude.norm().max(amplitude.norm());
    if !(phi_ok && dphi_ok && amp_ok) {
        return Err(CoulombError::StepTooLarge(rho));
    }
    Ok(Node { rho, x, sheets, jet, power_arg, amplitude })
}

/// Updates the sheets for cut crossings between `from.x` and `x` within one
/// closed form, returning `φ` and `3S/2` at `x`.
fn track(
    x: Complex64,
    a: Complex64,
    region: Region,
    sheets: &mut BranchState,
    from: &Node,
) -> Result<(Complex64, Complex64)> {
    let before = inner_roots(from.x, a, region);
    for ((slot, u0), (_, u1)) in before.into_iter().zip(inner_roots(x, a, region)) {
        if BranchedFn::Sqrt.crosses_cut(u0, u1) {
            let w = sheets.winding_mut(slot);
            *w = cross(BranchedFn::Sqrt, u0, u1, *w)?;
        }
    }
    let before = outer_terms(from.x, a, region, &from.sheets)?;
    let after = outer_terms(x, a, region, sheets)?;
    for ((slot, f, u0), (_, _, u1)) in before.into_iter().zip(after) {
        if f.crosses_cut(u0, u1) {
            let w0 = from.sheets.winding(slot);
            *sheets.winding_mut(slot) = cross(f, u0, u1, w0)?;
        }
    }
    let arg = 1.5 * phase_integral(x, a, region, sheets)?;
    if let Some(prev) = from.power_arg {
        if BranchedFn::Log.crosses_cut(prev, arg) {
            sheets.power = cross(BranchedFn::Log, prev, arg, sheets.power)?;
        }
    }
    let phi = signed(invert_phase(arg / 1.5, sheets.power)?, region);
    Ok((phi, arg))
}

/// Entering a closed form, either across `Re x = 0` or out of the series
/// disc: picks the sheets of that form, near the current ones, whose `φ`
/// is closest to `previous`; ties go to the smallest change of windings.
fn rematch(
    x: Complex64,
    a: Complex64,
    region: Region,
    sheets: &mut BranchState,
    previous: Complex64,
) -> Result<(Complex64, Complex64)> {
    let mut slots: Vec<(Slot, &[i32])> = inner_roots(x, a, region).into_iter().map(|(s, _)| (s, &[0, 1][..])).collect();
    for (slot, _, _) in outer_terms(x, a, region, sheets)? {
        slots.push((slot, &[0, -1, 1][..]));
    }
    slots.push((Slot::Power, &[0, -1, 1][..]));

    let base = *sheets;
    let mut best: Option<(f64, i32, BranchState, Complex64, Complex64)> = None;
    let mut trial = base;
    let total: usize = slots.iter().map(|(_, d)| d.len()).product();
    for mut code in 0..total {
        let mut cost = 0;
        for (slot, deltas) in &slots {
            let d = deltas[code % deltas.len()];
            code /= deltas.len();
            *trial.winding_mut(*slot) = base.winding(*slot) + d;
            cost += d.abs();
        }
        let Ok(s) = phase_integral(x, a, region, &trial) else { continue };
        let Ok(magnitude) = invert_phase(s, trial.power) else { continue };
        let phi = signed(magnitude, region);
        let jump = (phi - previous).norm();
        let better = match best {
            None => true,
            Some((j, c, ..)) => jump < j * (1.0 - 1e-9) || (jump <= j * (1.0 + 1e-9) && cost < c),
        };
        if better {
            best = Some((jump, cost, trial, phi, 1.5 * s));
        }
    }
    let (_, _, chosen, phi, arg) = best.ok_or(CoulombError::BranchAmbiguity(x))?;
    *sheets = chosen;
    Ok((phi, arg))
}

/// Values of the two closed forms at the same `x`, on principal sheets.
/// Near the imaginary `x` axis they describe the same function, which is
/// what makes the handoff between them continuous.
pub fn handoff_mismatch(x: Complex64, a: Complex64) -> Result<f64> {
    let sheets = BranchState::default();
    let pos = signed(invert_phase(phase_integral(x, a, Region::NonNegative, &sheets)?, 0)?, Region::NonNegative);
    let neg = signed(invert_phase(phase_integral(x, a, Region::Negative, &sheets)?, 0)?, Region::Negative);
    Ok((pos - neg).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wkb::wkb_quad;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad_distance(a: &CoulombQuad, b: &CoulombQuad) -> f64 {
        let scale = a.as_array().iter().map(|v| v.norm()).fold(0.0, f64::max);
        a.as_array().iter().zip(b.as_array()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max) / scale
    }

    #[test]
    fn closed_rectangle_returns_to_start() {
        let ell = c(2.0, 0.0);
        let eta = c(10.0, 0.0);
        let path = ContourPath::rectangle(c(5.0, -8.0), c(45.0, 8.0), default_max_step(ell, eta, c(5.0, -8.0)).unwrap())
            .unwrap();
        let pts = continue_path(ell, eta, &path).unwrap();
        let (first, last) = (pts.first().unwrap(), pts.last().unwrap());
        assert!(quad_distance(&first.quad, &last.quad) <= 1e-8);
        assert_eq!(last.sheets, first.sheets);
    }

    #[test]
    fn radial_ray_needs_no_winding() {
        let (ell, eta) = (c(2.0, 1.0), c(10.0, 1.0));
        let path = ContourPath::radial(PI / 4.0, 2.0, 40.0, 39, 0.4).unwrap();
        for p in continue_path(ell, eta, &path).unwrap() {
            assert!(p.sheets.is_principal(), "{p:?}");
            let direct = wkb_quad(&ComplexParams::new(ell, eta, p.rho).unwrap()).unwrap();
            assert!(quad_distance(&direct, &p.quad) <= 1e-12, "rho = {}", p.rho);
        }
    }

    #[test]
    fn closed_forms_agree_at_handoff() {
        for a in [c(0.0, 0.0), c(0.0143, 0.0091), c(0.3, 0.0)] {
            for y in [0.02, 0.1, 0.3] {
                for im in [y, -y] {
                    let x = c(0.0, im);
                    assert!(handoff_mismatch(x, a).unwrap() <= 1e-7, "x = {x}, a = {a}");
                }
            }
        }
    }

    #[test]
    fn reverse_path_undoes_windings() {
        let (ell, eta) = (c(2.0, 0.0), c(10.0, 0.0));
        // Around the turning point and back out, well clear of the origin.
        let path = ContourPath::new(
            vec![c(30.0, 0.5), c(30.0, 12.0), c(12.0, 12.0), c(12.0, -6.0), c(40.0, -6.0)],
            0.4,
        )
        .unwrap();
        let forward = continue_path(ell, eta, &path).unwrap();
        let end = forward.last().unwrap();
        let back = continue_path(ell, eta, &path.reversed()).unwrap();
        let start_again = back.last().unwrap();
        assert!(end.sheets.cancels(&start_again.sheets), "{:?} {:?}", end.sheets, start_again.sheets);
        assert!(quad_distance(&start_again.quad, &forward[0].quad) <= 1e-8);
    }

    #[test]
    fn continuity_along_path() {
        let (ell, eta) = (c(2.0, 0.0), c(10.0, 0.0));
        let path = ContourPath::through(ell, eta, vec![c(3.0, 0.5), c(20.0, 3.0), c(40.0, -2.0)]).unwrap();
        let pts = continue_path(ell, eta, &path).unwrap();
        for w in pts.windows(2) {
            let d = (w[1].rho - w[0].rho).norm();
            let local = w[0].quad.fp.norm().max(w[1].quad.fp.norm()) + w[0].quad.gp.norm().max(w[1].quad.gp.norm());
            let jump = (w[1].quad.f - w[0].quad.f).norm() + (w[1].quad.g - w[0].quad.g).norm();
            assert!(jump <= 3.0 * local * d + 1e-12);
        }
    }

    #[test]
    fn rejects_cut_ray() {
        assert!(ContourPath::new(vec![c(-1.0, 0.0)], 0.1).is_err());
        assert!(ContourPath::new(vec![c(-1.0, 1.0), c(-1.0, -1.0)], 0.1).is_err());
        assert!(ContourPath::new(vec![c(1.0, 1.0), c(1.0, -1.0)], 0.1).is_ok());
    }

    #[test]
    fn refinement_respects_max_step() {
        let path = ContourPath::new(vec![c(1.0, 0.0), c(5.0, 3.0)], 0.3).unwrap();
        let pts = path.refined();
        assert!(pts.windows(2).all(|w| (w[1] - w[0]).norm() <= 0.3 + 1e-12));
        assert_eq!(*pts.last().unwrap(), c(5.0, 3.0));
    }

    fn loop_around(ell: Complex64, eta: Complex64, radius: f64) -> ContourPath {
        let rt = turning_geometry(&ComplexParams::new(ell, eta, c(1.0, 0.0)).unwrap()).unwrap().rho_t;
        let pts = (0..=200)
            .map(|k| rt + Complex64::from_polar(radius * rt.norm(), 2.0 * PI * k as f64 / 200.0))
            .collect();
        ContourPath::new(pts, rt.norm() / 50.0).unwrap()
    }

    #[test]
    fn loop_with_cut_crossings_closes() {
        let (ell, eta) = (c(2.0, 5.0), c(10.0, 0.0));
        let path = loop_around(ell, eta, 0.7);
        let forward = continue_path(ell, eta, &path).unwrap();
        let changes = forward.windows(2).filter(|w| w[0].sheets != w[1].sheets).count();
        assert!(changes > 0);
        let (first, last) = (forward.first().unwrap(), forward.last().unwrap());
        assert!(quad_distance(&first.quad, &last.quad) <= 1e-8);
        let back = continue_path(ell, eta, &path.reversed()).unwrap();
        assert!(last.sheets.cancels(&back.last().unwrap().sheets), "{:?} {:?}", last.sheets, back.last().unwrap().sheets);
    }

    #[test]
    fn too_coarse_refinement_is_reported() {
        let (ell, eta) = (c(2.0, 5.0), c(10.0, 0.0));
        let path = loop_around(ell, eta, 0.7);
        let pointwise: Vec<_> = path
            .refined()
            .iter()
            .map(|&rho| wkb_quad(&ComplexParams::new(ell, eta, rho).unwrap()).unwrap())
            .collect();
        let continued = continue_quad(ell, eta, &path).unwrap();
        // Principal evaluation jumps somewhere on this loop; continuation does not.
        let worst = pointwise.iter().zip(&continued).map(|(p, q)| quad_distance(q, p)).fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }
}
