//! Drawings for inspection: SVG from a barycentric embedding, and
//! Graphviz dot text.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::map::Tiling;

/// Vertex positions with the largest face on the unit circle and every
/// other vertex at the average of its neighbours.
pub fn barycentric_layout(t: &Tiling) -> Vec<(f64, f64)> {
    let nv = t.vertex_count();
    let faces = t.faces();
    let outer = faces
        .iter()
        .enumerate()
        .max_by_key(|(i, f)| (f.len(), std::cmp::Reverse(*i)))
        .map(|(_, f)| f.clone())
        .unwrap_or_default();
    let mut pos = vec![(0.0, 0.0); nv];
    let mut pinned = vec![false; nv];
    let k = outer.len() as f64;
    for (i, &h) in outer.iter().enumerate() {
        let v = t.vertex_of(h);
        // Clockwise, so the outer face reads counterclockwise from outside.
        let a = -2.0 * PI * i as f64 / k;
        pos[v] = (a.cos(), a.sin());
        pinned[v] = true;
    }
    let mut nbrs = vec![Vec::new(); nv];
    for h in 0..t.half_edge_count() {
        nbrs[t.vertex_of(h)].push(t.vertex_of(t.twin(h)));
    }
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for v in 0..nv {
            if pinned[v] || nbrs[v].is_empty() {
                continue;
            }
            let n = nbrs[v].len() as f64;
            let (sx, sy) = nbrs[v]
                .iter()
                .fold((0.0, 0.0), |(x, y), &w| (x + pos[w].0, y + pos[w].1));
            let p = (sx / n, sy / n);
            moved = moved.max((p.0 - pos[v].0).abs() + (p.1 - pos[v].1).abs());
            pos[v] = p;
        }
        if moved < 1e-9 {
            break;
        }
    }
    pos
}

/// SVG 1.1 drawing: edges as lines, corner letters pulled toward the
/// middle of their face. The outer face's corners are not drawn.
pub fn to_svg(t: &Tiling) -> String {
    let pos = barycentric_layout(t);
    let size = 800.0;
    let scale = size * 0.45;
    let map = |(x, y): (f64, f64)| (size / 2.0 + scale * x, size / 2.0 - scale * y);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">
<rect width="100%" height="100%" fill="white"/>
<g stroke="black" stroke-width="1.2">"#
    );
    for h in 0..t.half_edge_count() {
        if h < t.twin(h) {
            let (x1, y1) = map(pos[t.vertex_of(h)]);
            let (x2, y2) = map(pos[t.vertex_of(t.twin(h))]);
            let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
        }
    }
    let _ = writeln!(s, "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" fill=\"#a02020\">");
    let faces = t.faces();
    let outer = faces
        .iter()
        .enumerate()
        .max_by_key(|(i, f)| (f.len(), std::cmp::Reverse(*i)))
        .map(|(i, _)| i);
    for (fi, f) in faces.iter().enumerate() {
        if Some(fi) == outer {
            continue;
        }
        let n = f.len() as f64;
        let c = f.iter().fold((0.0, 0.0), |(x, y), &h| {
            let p = pos[t.vertex_of(h)];
            (x + p.0 / n, y + p.1 / n)
        });
        for &h in f {
            let p = pos[t.vertex_of(h)];
            let q = (p.0 + 0.3 * (c.0 - p.0), p.1 + 0.3 * (c.1 - p.1));
            let (x, y) = map(q);
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}">{}</text>"#, y + 4.0, t.corner(h).greek());
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Graphviz undirected multigraph; vertices are labeled by their corner
/// multisets.
pub fn to_dot(t: &Tiling) -> String {
    let mut s = String::from("graph tiling {\n  node [shape=circle, fontsize=10];\n");
    for (v, m) in t.vertex_labels().iter().enumerate() {
        let _ = writeln!(s, "  v{v} [label=\"{}\"];", m.to_letters());
    }
    for h in 0..t.half_edge_count() {
        if h < t.twin(h) {
            let _ = writeln!(s, "  v{} -- v{};", t.vertex_of(h), t.vertex_of(t.twin(h)));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{pp, Chirality};

    #[test]
    fn drawings_mention_every_edge() {
        let t = pp("cube", Chirality::Right).unwrap();
        let svg = to_svg(&t);
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<line").count(), t.edge_count());
        let dot = to_dot(&t);
        assert_eq!(dot.matches(" -- ").count(), t.edge_count());
        assert!(barycentric_layout(&t).iter().all(|p| p.0.is_finite() && p.1.is_finite()));
    }
}
