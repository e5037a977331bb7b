//! Pictures of the covering of the weight chart `μ ↦ (μ_p/μ_base)_p` by the
//! regions of the strata, for `δ = 2` (a half-line) and `δ = 3` (a quadrant).

use std::fmt::Write as _;

use limcan::feasibility::{solve, Constraint, Relation};
use limcan::poset::{key_label, ClosurePoset};
use limcan::rational::{q, to_decimal, Rational};
use limcan::strata::{chart, side_constraints, stratum_dim};
use limcan::{CurveConfig, DeltaSet, Error, Result};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

const DIGITS: usize = 12;
const WIDTH: i64 = 800;
const MARGIN: i64 = 40;

#[derive(Clone, Debug, Serialize)]
pub struct Mark {
    /// One of `mark-x`, `mark-y`, `mark-xy`, `crossing`.
    pub class: String,
    #[serde(with = "limcan::rational::serde_q::vec")]
    pub chart: Vec<Rational>,
    pub stratum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Segment {
    /// `solid` for the focus-`X` side, `dashed` for the focus-`Y` side.
    pub class: String,
    #[serde(with = "limcan::rational::serde_q::vec")]
    pub from: Vec<Rational>,
    #[serde(with = "limcan::rational::serde_q::vec")]
    pub to: Vec<Rational>,
    pub data: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fan {
    pub delta: usize,
    #[serde(with = "limcan::rational::serde_q")]
    pub extent: Rational,
    pub marks: Vec<Mark>,
    pub segments: Vec<Segment>,
}

fn mark_class(config: &CurveConfig, poset: &ClosurePoset, i: usize) -> &'static str {
    let d = stratum_dim(config, &poset.nodes[i]);
    let top = config.delta as i64 - 1;
    match (d.dim_x == top, d.dim_y == top) {
        (true, true) => "mark-xy",
        (true, false) => "mark-x",
        (false, true) => "mark-y",
        (false, false) => "crossing",
    }
}

pub fn build_fan(config: &CurveConfig, poset: &ClosurePoset) -> Result<Fan> {
    if !(2..=3).contains(&config.delta) {
        return Err(Error::Unsupported(format!("fan pictures need δ ∈ {{2, 3}}, got δ = {}", config.delta)));
    }
    let top = config.delta as i64 - 1;
    let mut marks: Vec<Mark> = poset
        .maximal()
        .into_iter()
        .filter(|&i| poset.dims[i] == top && top > 0)
        .map(|i| Mark {
            class: mark_class(config, poset, i).into(),
            chart: chart(config, &poset.nodes[i].witness_mu),
            stratum: key_label(config, &poset.keys[i]),
        })
        .collect();
    marks.sort_by(|a, b| a.chart.cmp(&b.chart));

    let far = marks.iter().flat_map(|m| m.chart.iter()).max().cloned().unwrap_or_else(Rational::one);
    let extent = (far * Rational::new(5.into(), 4.into())).max(q(2));

    let mut segments = Vec::new();
    if config.delta == 3 {
        segments.extend(side_segments(config, config.g_y, "solid", &extent));
        segments.extend(side_segments(config, config.g_x, "dashed", &extent));
    }
    Ok(Fan { delta: config.delta, extent, marks, segments })
}

fn ge(coeffs: Vec<Rational>, constant: Rational) -> Constraint {
    Constraint::new(coeffs, constant, Relation::Ge)
}

/// One-dimensional pieces of the covering by single-side regions: data
/// `(a, S)` with `|a| > g` and `|S| = 2`, clipped to the displayed box.
fn side_segments(config: &CurveConfig, g: i64, class: &str, extent: &Rational) -> Vec<Segment> {
    let n = 3;
    let base = config.base_point();
    let mut out = Vec::new();
    if g == 0 {
        return out;
    }
    for a0 in 0..=g {
        for a1 in 0..=g {
            for a2 in 0..=g {
                let a = [a0, a1, a2];
                let sum: i64 = a.iter().sum();
                if sum != g + 1 {
                    continue;
                }
                for s in DeltaSet::full(n).subsets().into_iter().filter(|s| s.len() == 2) {
                    if s.iter().any(|p| a[p] == 0) {
                        continue;
                    }
                    if let Some(seg) = clip(config, &a, s, base, extent) {
                        out.push(Segment { class: class.into(), data: format!("a={a:?} S={:?}", s.to_vec()), ..seg });
                    }
                }
            }
        }
    }
    out
}

/// Closure of the region of `(a, S)` in the chart, intersected with
/// `[0, extent]²`, as a segment; `None` if it misses the box or is a point.
fn clip(config: &CurveConfig, a: &[i64], s: DeltaSet, base: usize, extent: &Rational) -> Option<Segment> {
    let n = a.len();
    let mut pin = vec![Rational::zero(); n];
    pin[base] = Rational::one();
    let closed = |cs: Vec<Constraint>| -> Vec<Constraint> {
        cs.into_iter()
            .map(|c| if c.rel == Relation::Gt { Constraint { rel: Relation::Ge, ..c } } else { c })
            .collect()
    };
    let mut cs = side_constraints(a, s);
    let mut strict = cs.clone();
    strict.push(Constraint::new(pin.clone(), q(-1), Relation::Eq));
    for p in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[p] = Rational::one();
        strict.push(Constraint::new(e, Rational::zero(), Relation::Gt));
    }
    // the open region must meet the open box
    for p in (0..n).filter(|&p| p != base) {
        let mut e = vec![Rational::zero(); n];
        e[p] = -Rational::one();
        strict.push(Constraint::new(e, extent.clone(), Relation::Gt));
    }
    let w = solve(n, &strict)?;
    cs = closed(cs);
    // direction: kernel of the equality and the pin
    let eq = cs.iter().find(|c| c.rel == Relation::Eq)?.coeffs.clone();
    let d: Vec<Rational> = cross(&eq, &pin);
    if d.iter().all(Zero::is_zero) {
        return None;
    }
    for p in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[p] = Rational::one();
        cs.push(ge(e.clone(), Rational::zero()));
        if p != base {
            cs.push(ge(e.iter().map(|x| -x).collect(), extent.clone()));
        }
    }
    let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
    for c in cs.iter().filter(|c| c.rel != Relation::Eq) {
        // c·(w + t d) + k ≥ 0
        let slope: Rational = c.coeffs.iter().zip(&d).map(|(x, y)| x * y).sum();
        let val = c.value(&w);
        if slope.is_zero() {
            continue;
        }
        let t = -val / &slope;
        if slope.is_positive() {
            lo = Some(lo.map_or(t.clone(), |l: Rational| l.max(t)));
        } else {
            hi = Some(hi.map_or(t.clone(), |h: Rational| h.min(t)));
        }
    }
    let (lo, hi) = (lo?, hi?);
    if lo >= hi {
        return None;
    }
    let at = |t: &Rational| -> Vec<Rational> {
        let mu: Vec<Rational> = w.iter().zip(&d).map(|(x, y)| x + t * y).collect();
        chart(config, &mu)
    };
    Some(Segment { class: String::new(), from: at(&lo), to: at(&hi), data: String::new() })
}

fn cross(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn px(x: &Rational, extent: &Rational) -> String {
    let v = q(MARGIN) + x * q(WIDTH - 2 * MARGIN) / extent;
    to_decimal(&v, DIGITS)
}

fn py(y: &Rational, extent: &Rational) -> String {
    let v = q(WIDTH - MARGIN) - y * q(WIDTH - 2 * MARGIN) / extent;
    to_decimal(&v, DIGITS)
}

fn glyph(class: &str) -> &'static str {
    match class {
        "mark-x" => "×",
        "mark-y" => "∗",
        "mark-xy" => "⊛",
        _ => "",
    }
}

pub fn to_svg(fan: &Fan, config: &CurveConfig) -> String {
    let e = &fan.extent;
    let mut s = String::new();
    let height = if fan.delta == 2 { 160 } else { WIDTH };
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\">"
    );
    let _ = writeln!(
        s,
        "<style>.axis{{stroke:#000;stroke-width:1.5}} .solid{{stroke:#000}} .dashed{{stroke:#555;stroke-dasharray:6 4}} \
         .crossing{{fill:#c00}} text{{font-family:serif;font-size:14px}}</style>"
    );
    let base = &config.labels[config.base_point()];
    let _ = writeln!(
        s,
        "<desc>g_X={} g_Y={} delta={} chart=mu_p/mu_{base} extent={}</desc>",
        config.g_x,
        config.g_y,
        config.delta,
        e
    );
    if fan.delta == 2 {
        let y = 80;
        let _ = writeln!(s, "<line class=\"axis\" x1=\"{MARGIN}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>", WIDTH - MARGIN);
        let _ = writeln!(s, "<line class=\"axis\" x1=\"{MARGIN}\" y1=\"{}\" x2=\"{MARGIN}\" y2=\"{}\"/>", y - 8, y + 8);
        for m in &fan.marks {
            let x = px(&m.chart[0], e);
            let _ = writeln!(
                s,
                "<g class=\"mark {}\" data-chart=\"{}\" data-stratum=\"{}\"><text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\
                 <text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text></g>",
                m.class,
                m.chart[0],
                m.stratum,
                y + 5,
                glyph(&m.class),
                y - 16,
                m.chart[0]
            );
        }
    } else {
        let lo = MARGIN;
        let hi = WIDTH - MARGIN;
        let _ = writeln!(s, "<line class=\"axis\" x1=\"{lo}\" y1=\"{hi}\" x2=\"{hi}\" y2=\"{hi}\"/>");
        let _ = writeln!(s, "<line class=\"axis\" x1=\"{lo}\" y1=\"{hi}\" x2=\"{lo}\" y2=\"{lo}\"/>");
        for g in &fan.segments {
            let _ = writeln!(
                s,
                "<line class=\"{}\" data-region=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                g.class,
                g.data,
                px(&g.from[0], e),
                py(&g.from[1], e),
                px(&g.to[0], e),
                py(&g.to[1], e)
            );
        }
        for m in &fan.marks {
            let (x, y) = (px(&m.chart[0], e), py(&m.chart[1], e));
            if m.class == "crossing" {
                let _ = writeln!(
                    s,
                    "<g class=\"crossing\" data-chart=\"{},{}\" data-stratum=\"{}\"><circle cx=\"{x}\" cy=\"{y}\" r=\"3\"/></g>",
                    m.chart[0], m.chart[1], m.stratum
                );
            } else {
                let _ = writeln!(
                    s,
                    "<g class=\"mark {}\" data-chart=\"{},{}\" data-stratum=\"{}\"><text x=\"{x}\" y=\"{y}\" dy=\"5\" text-anchor=\"middle\">{}</text></g>",
                    m.class,
                    m.chart[0],
                    m.chart[1],
                    m.stratum,
                    glyph(&m.class)
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use limcan::poset::build_poset;
    use limcan::strata::EnumerateOptions;

    fn fan(gx: i64, gy: i64, d: usize) -> Fan {
        let cfg = CurveConfig::new(gx, gy, d).unwrap();
        build_fan(&cfg, &build_poset(&cfg, EnumerateOptions::default()).unwrap()).unwrap()
    }

    #[test]
    fn delta_two_marks_sit_on_the_line() {
        let f = fan(2, 4, 2);
        assert_eq!(f.marks.len(), 6);
        assert!(f.segments.is_empty());
        assert!(f.marks.windows(2).all(|w| w[0].chart < w[1].chart));
        assert!(f.marks.iter().all(|m| m.chart.len() == 1 && m.chart[0] <= f.extent));
    }

    #[test]
    fn segments_stay_in_the_viewport() {
        let f = fan(2, 4, 3);
        assert_eq!(f.marks.iter().filter(|m| m.class == "crossing").count(), 6);
        let zero = q(0);
        for s in &f.segments {
            for c in s.from.iter().chain(&s.to) {
                assert!(*c >= zero && *c <= f.extent, "{c}");
            }
            assert_ne!(s.from, s.to);
        }
    }

    #[test]
    fn decimal_coordinates() {
        let e = q(2);
        assert_eq!(px(&q(0), &e), MARGIN.to_string());
        assert_eq!(py(&q(0), &e), (WIDTH - MARGIN).to_string());
    }
}
