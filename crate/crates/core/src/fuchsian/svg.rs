//! SVG drawing of a fundamental domain in the unit disc.

use super::domain::FundamentalDomain;
use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

pub fn render_svg(dom: &FundamentalDomain) -> String {
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"600\" height=\"600\">\n");
    s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\"/>\n");
    for side in &dom.sides {
        let (a, b) = (side.start, side.end);
        // orientation of the arc around its circle decides the sweep flag
        let ca = a - side.circle_center;
        let cb = b - side.circle_center;
        let cross = ca.re * cb.im - ca.im * cb.re;
        // the y axis is flipped in SVG coordinates
        let sweep = if cross > 0.0 { 0 } else { 1 };
        let _ = writeln!(
            s,
            "<path d=\"M {:.6} {:.6} A {:.6} {:.6} 0 0 {} {:.6} {:.6}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\"/>",
            a.re, -a.im, side.radius, side.radius, sweep, b.re, -b.im
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn export_svg(dom: &FundamentalDomain, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(dom))?;
    Ok(())
}
