//! Spectral-sequence charts: degree `t` across, filtration `s` up.

use std::fmt::Write;

use pageturner::complex::Page;
use pageturner::linalg::Group;

fn factor(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Z`, `Z^2`, torsion as prime powers `p^k`, summands joined by `+`; empty for zero.
pub fn label(g: &Group) -> String {
    let free = g.orders().iter().filter(|&&o| o == 0).count();
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for &o in g.orders().iter().filter(|&&o| o > 1) {
        for (p, k) in factor(o) {
            parts.push(if k == 1 { p.to_string() } else { format!("{p}^{k}") });
        }
    }
    parts.join("+")
}

struct Grid {
    s: (i32, i32),
    t: (i32, i32),
}

impl Grid {
    fn of(pages: &[Page]) -> Option<Grid> {
        let keys = || pages.iter().flat_map(|p| p.e.iter().filter(|(_, g)| !g.is_trivial()).map(|(b, _)| *b));
        let (s0, s1) = (keys().map(|b| b.0).min()?, keys().map(|b| b.0).max()?);
        let (t0, t1) = (keys().map(|b| b.1).min()?, keys().map(|b| b.1).max()?);
        Some(Grid { s: (s0, s1), t: (t0, t1) })
    }
}

pub fn ascii(pages: &[Page]) -> String {
    let mut out = String::new();
    let Some(grid) = Grid::of(pages) else {
        for p in pages {
            let _ = writeln!(out, "E_{}: zero", p.r);
        }
        return out;
    };
    for p in pages {
        let cell = |s: i32, t: i32| p.e.get(&(s, t)).map(label).unwrap_or_default();
        let width = (grid.s.0..=grid.s.1)
            .flat_map(|s| (grid.t.0..=grid.t.1).map(move |t| (s, t)))
            .map(|(s, t)| cell(s, t).chars().count())
            .max()
            .unwrap_or(1)
            .max(3);
        let _ = writeln!(out, "E_{}", p.r);
        for s in (grid.s.0..=grid.s.1).rev() {
            let _ = write!(out, "{s:>4} |");
            for t in grid.t.0..=grid.t.1 {
                let c = cell(s, t);
                let c = if c.is_empty() { ".".to_string() } else { c };
                let _ = write!(out, " {c:>width$}");
            }
            out.push('\n');
        }
        let _ = write!(out, "     +");
        for _ in grid.t.0..=grid.t.1 {
            let _ = write!(out, "{}", "-".repeat(width + 1));
        }
        out.push_str("\n   t  ");
        for t in grid.t.0..=grid.t.1 {
            let _ = write!(out, " {t:>width$}");
        }
        out.push_str("\n\n");
    }
    out
}

const CELL: i32 = 56;
const MARGIN: i32 = 40;

/// One panel per page, with nonzero differentials drawn as arrows.
pub fn svg(pages: &[Page]) -> String {
    let grid = Grid::of(pages).unwrap_or(Grid { s: (0, 0), t: (0, 0) });
    let cols = grid.t.1 - grid.t.0 + 1;
    let rows = grid.s.1 - grid.s.0 + 1;
    let pw = cols * CELL + 2 * MARGIN;
    let ph = rows * CELL + 2 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="monospace" font-size="11">"#,
        pw * pages.len().max(1) as i32,
        ph
    );
    out.push_str(
        r#"<defs><marker id="a" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="crimson"/></marker></defs>"#,
    );
    out.push('\n');
    for (i, p) in pages.iter().enumerate() {
        let ox = i as i32 * pw + MARGIN;
        let x = |t: i32| ox + (t - grid.t.0) * CELL + CELL / 2;
        let y = |s: i32| MARGIN + (grid.s.1 - s) * CELL + CELL / 2;
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="13">E_{}</text>"#, ox, MARGIN - 16, p.r);
        for t in grid.t.0..=grid.t.1 {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="middle" fill="gray">{t}</text>"#,
                x(t),
                MARGIN + rows * CELL + 14
            );
        }
        for s in grid.s.0..=grid.s.1 {
            let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end" fill="gray">{s}</text>"#, ox - 4, y(s) + 4);
        }
        let _ = writeln!(
            out,
            r#"<rect x="{ox}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="lightgray"/>"#,
            cols * CELL,
            rows * CELL
        );
        for (&(s, t), g) in &p.e {
            if g.is_trivial() || s < grid.s.0 || s > grid.s.1 || t < grid.t.0 || t > grid.t.1 {
                continue;
            }
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3"/>"#, x(t), y(s));
            let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, x(t), y(s) - 7, label(g));
        }
        let r = p.r as i32;
        for (&(s, t), d) in &p.d {
            let (s2, t2) = (s - r, t - 1);
            let inside = |s: i32, t: i32| (grid.s.0..=grid.s.1).contains(&s) && (grid.t.0..=grid.t.1).contains(&t);
            if d.is_zero() || !inside(s, t) || !inside(s2, t2) {
                continue;
            }
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="crimson" marker-end="url(#a)"/>"#,
                x(t),
                y(s),
                x(t2),
                y(s2)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(label(&Group::from_orders(&[0, 0, 12])), "Z^2+2^2+3");
        assert_eq!(label(&Group::from_orders(&[2])), "2");
        assert_eq!(label(&Group::zero()), "");
    }
}
