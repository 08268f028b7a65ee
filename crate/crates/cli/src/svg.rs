//! SVG drawing of a planar trajectory.

use std::fmt::Write as _;

use billiards::walker::{unfolded_position, walk_reflect, WalkError};
use billiards::Box64;

const PAD: i64 = 20;
const TARGET: i64 = 480;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Step indices in `(0, ℓ]` where some coordinate hits a wall.
fn event_times(bx: &Box64) -> Vec<i64> {
    let mut events: Vec<i64> = bx
        .sides()
        .iter()
        .flat_map(|&a| (1..=bx.ell() / a).map(move |k| k * a))
        .collect();
    events.sort_unstable();
    events.dedup();
    events
}

fn segment(out: &mut String, from: (i64, i64), to: (i64, i64), color: &str, dashed: bool) {
    let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
    let _ = writeln!(
        out,
        r#"    <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2" vector-effect="non-scaling-stroke"{dash}/>"#,
        from.0, from.1, to.0, to.1
    );
}

pub fn render(bx: &Box64, cap: u64, unfolded: bool, colored: bool) -> Result<String, WalkError> {
    let (_, line) = walk_reflect(bx, cap)?;
    let (a, b) = (bx.sides()[0], bx.sides()[1]);
    let (w, h) = if unfolded { (2 * a, 2 * b) } else { (a, b) };
    let unit = (TARGET / w.max(h)).max(4);
    let (pw, ph) = (w * unit + 2 * PAD, h * unit + 2 * PAD);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{pw}" height="{ph}" viewBox="0 0 {pw} {ph}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{pw}" height="{ph}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"  <g transform="translate({PAD},{}) scale({unit},-{unit})" fill="none" stroke-linecap="round">"#,
        PAD + h * unit
    );
    let _ = writeln!(out, r##"    <g stroke="#e0e0e0" stroke-width="1" vector-effect="non-scaling-stroke">"##);
    for x in 0..=w {
        let _ = writeln!(out, r#"      <line x1="{x}" y1="0" x2="{x}" y2="{h}" vector-effect="non-scaling-stroke"/>"#);
    }
    for y in 0..=h {
        let _ = writeln!(out, r#"      <line x1="0" y1="{y}" x2="{w}" y2="{y}" vector-effect="non-scaling-stroke"/>"#);
    }
    let _ = writeln!(out, "    </g>");
    let _ = writeln!(
        out,
        r##"    <rect x="0" y="0" width="{a}" height="{b}" stroke="#000000" stroke-width="2" vector-effect="non-scaling-stroke"/>"##
    );
    if unfolded {
        let _ = writeln!(
            out,
            r##"    <rect x="0" y="0" width="{w}" height="{h}" stroke="#808080" stroke-width="1" vector-effect="non-scaling-stroke"/>"##
        );
    }

    let _ = writeln!(out, "    <g>");
    let xy = |t: i64| {
        let p = unfolded_position(bx, t);
        (p.coords()[0], p.coords()[1])
    };
    let events = event_times(bx);
    if colored || unfolded {
        let mut prev = 0;
        for (k, &t) in events.iter().enumerate() {
            let color = if colored { PALETTE[k % PALETTE.len()] } else { "#1f77b4" };
            segment(&mut out, xy(prev), xy(t), color, false);
            if unfolded {
                // position on the doubled torus, unwrapped across the segment
                let start = (prev % (2 * a), prev % (2 * b));
                let end = (start.0 + t - prev, start.1 + t - prev);
                let color = if colored { color } else { "#d62728" };
                segment(&mut out, start, end, color, true);
            }
            prev = t;
        }
    } else {
        let points: Vec<String> = line
            .vertices
            .iter()
            .map(|v| format!("{},{}", v.coords()[0], v.coords()[1]))
            .collect();
        let _ = writeln!(
            out,
            r##"    <polyline points="{}" stroke="#1f77b4" stroke-width="2" vector-effect="non-scaling-stroke"/>"##,
            points.join(" ")
        );
    }
    let _ = writeln!(out, "    </g>");

    let end = bx.end_corner();
    let r = 0.2_f64.max(6.0 / unit as f64);
    let _ = writeln!(out, r##"    <circle cx="0" cy="0" r="{r:.3}" fill="#2ca02c"/>"##);
    let _ = writeln!(
        out,
        r##"    <circle cx="{}" cy="{}" r="{r:.3}" fill="#d62728"/>"##,
        end.coords()[0],
        end.coords()[1]
    );
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
