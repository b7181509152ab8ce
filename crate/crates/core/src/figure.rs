//! SVG rendering of torus matchings.
//!
//! The two tori identified by the gluing are drawn as a single lattice,
//! together with four labelled arrows for the internal and external circle
//! directions of both sides. With the plus-side internal circumference
//! normalised to 1, the lattice is generated by `s+`, `i` and
//! `(s+ + i eps+)/k+`, and the minus-side directions are the pullbacks
//! `dv- = xi- e^{i theta}`, `du- = -i zeta- e^{i theta}` with
//! `xi- = |m s+ + i n| / k+` and `zeta- = |p s+ + i q| / k+`.

use crate::gluing::{DerivedGeometry, GluingData, GluingError, TorusCase};
use num_traits::ToPrimitive;

/// A labelled direction vector.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Arrow {
    pub label: &'static str,
    pub dx: f64,
    pub dy: f64,
}

/// Point-lattice figure for one torus matching.
#[derive(Clone, PartialEq, Debug)]
pub struct TorusFigure {
    pub lattice_points: Vec<(f64, f64)>,
    pub arrows: [Arrow; 4],
    pub theta: f64,
}

/// Build the figure. The right-angle case has free circle ratios, so they
/// must be supplied; in the generic case `ratios` is ignored in favour of
/// the derived exact values.
pub fn torus_figure(
    gluing: &GluingData,
    geometry: &DerivedGeometry,
    ratios: Option<(f64, f64)>,
) -> Result<TorusFigure, GluingError> {
    let (s_plus, _s_minus) = match geometry.case {
        TorusCase::ThetaZeroExcluded => return Err(GluingError::ThetaZeroExcluded),
        TorusCase::RightAngle => ratios.ok_or(GluingError::FreeRatios)?,
        TorusCase::Generic => (
            geometry.s_plus_sq.as_ref().unwrap().to_f64().unwrap().sqrt(),
            geometry.s_minus_sq.as_ref().unwrap().to_f64().unwrap().sqrt(),
        ),
    };
    // orient so the minus external direction has positive angle
    let (n, p) = if gluing.n < 0 { (-gluing.n, -gluing.p) } else { (gluing.n, gluing.p) };
    let (m, q) = (gluing.m, gluing.q);
    let k_plus = gluing.k_plus as f64;
    let eps_plus = gluing.eps_plus as f64;
    let theta = geometry.theta;

    let xi_minus = ((m as f64 * s_plus).powi(2) + (n as f64).powi(2)).sqrt() / k_plus;
    let zeta_minus = ((p as f64 * s_plus).powi(2) + (q as f64).powi(2)).sqrt() / k_plus;

    let rot = (theta.cos(), theta.sin());
    let arrows = [
        Arrow { label: "dv+", dx: s_plus, dy: 0.0 },
        Arrow { label: "du+", dx: 0.0, dy: 1.0 },
        Arrow { label: "dv-", dx: xi_minus * rot.0, dy: xi_minus * rot.1 },
        // -i e^{i theta} = (sin theta, -cos theta)
        Arrow { label: "du-", dx: zeta_minus * rot.1, dy: -zeta_minus * rot.0 },
    ];
    // the external-direction angle must reproduce theta
    let dot = arrows[0].dx * arrows[2].dx + arrows[0].dy * arrows[2].dy;
    let norms = (arrows[0].dx.hypot(arrows[0].dy)) * (arrows[2].dx.hypot(arrows[2].dy));
    let measured = (dot / norms).clamp(-1.0, 1.0).acos();
    assert!(
        (measured - theta).abs() < 1e-9,
        "external directions meet at {measured}, expected {theta}"
    );

    // lattice generated by s+, i, (s+ + i eps+)/k+ inside a fixed window
    let window = 2.2 * s_plus.max(1.0);
    let mut points: Vec<(f64, f64)> = Vec::new();
    let range = (window / s_plus.min(1.0)).ceil() as i64 + 2;
    for a in -range..=range {
        for b in -range..=range {
            for c in 0..gluing.k_plus as i64 {
                let x = a as f64 * s_plus + c as f64 * s_plus / k_plus;
                let y = b as f64 + c as f64 * eps_plus / k_plus;
                if x.abs() <= window && y.abs() <= window {
                    let key = (x, y);
                    if !points
                        .iter()
                        .any(|p| (p.0 - key.0).abs() < 1e-9 && (p.1 - key.1).abs() < 1e-9)
                    {
                        points.push(key);
                    }
                }
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(TorusFigure { lattice_points: points, arrows, theta })
}

impl TorusFigure {
    /// One self-contained SVG document: lattice points as circles, the four
    /// direction vectors as labelled arrows.
    pub fn to_svg(&self) -> String {
        let scale = 80.0;
        let half = 260.0;
        let px = |x: f64| half + scale * x;
        let py = |y: f64| half - scale * y;
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
            (2.0 * half) as i64
        ));
        out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for (x, y) in &self.lattice_points {
            out.push_str(&format!(
                "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"3\" fill=\"black\"/>\n",
                px(*x),
                py(*y)
            ));
        }
        for arrow in &self.arrows {
            let (x2, y2) = (px(arrow.dx), py(arrow.dy));
            let (x1, y1) = (px(0.0), py(0.0));
            // stubby arrow head: two short segments rotated off the shaft
            let angle = (y2 - y1).atan2(x2 - x1);
            let head = 10.0;
            let left = angle + 2.6;
            let right = angle - 2.6;
            out.push_str(&format!(
                "  <line x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\" stroke=\"crimson\" stroke-width=\"2\"/>\n"
            ));
            out.push_str(&format!(
                "  <line x1=\"{x2:.4}\" y1=\"{y2:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"crimson\" stroke-width=\"2\"/>\n",
                x2 + head * left.cos(),
                y2 + head * left.sin()
            ));
            out.push_str(&format!(
                "  <line x1=\"{x2:.4}\" y1=\"{y2:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"crimson\" stroke-width=\"2\"/>\n",
                x2 + head * right.cos(),
                y2 + head * right.sin()
            ));
            out.push_str(&format!(
                "  <text x=\"{:.4}\" y=\"{:.4}\" font-size=\"16\" fill=\"crimson\">{}</text>\n",
                x2 + 6.0,
                y2 - 6.0,
                arrow.label
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}
