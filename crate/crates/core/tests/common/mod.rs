#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use regex::Regex;

static PATTERNS: LazyLock<Mutex<HashMap<String, Regex>>> = LazyLock::new(Default::default);

fn re(pattern: &str) -> Regex {
    PATTERNS
        .lock()
        .unwrap()
        .entry(pattern.to_string())
        .or_insert_with(|| Regex::new(pattern).unwrap())
        .clone()
}

/// Number of elements whose class attribute is exactly `class`.
pub fn count_class(svg: &str, class: &str) -> usize {
    svg.matches(&format!("class=\"{class}\"")).count()
}

pub fn view_box(svg: &str) -> [f64; 4] {
    let caps = re(r#"viewBox="([-0-9.]+) ([-0-9.]+) ([-0-9.]+) ([-0-9.]+)""#)
        .captures(svg)
        .expect("svg has a viewBox");
    [1, 2, 3, 4].map(|i| caps[i].parse().unwrap())
}

fn attr(tag: &str, name: &str) -> Option<f64> {
    let re = re(&format!(r#"\s{name}="([-0-9.e]+)""#));
    re.captures(tag).map(|c| c[1].parse().unwrap())
}

/// Axis-aligned extents of every circle, rect, polygon and text anchor.
pub fn element_boxes(svg: &str) -> Vec<(String, [f64; 4])> {
    let tag_re = re(r"<(circle|rect|polygon|text)\b[^>]*>");
    let points_re = re(r#"points="([^"]*)""#);
    let mut out = Vec::new();
    for m in tag_re.find_iter(svg) {
        let tag = m.as_str();
        let kind = tag[1..].split_whitespace().next().unwrap();
        let bbox = match kind {
            "circle" => {
                let (cx, cy, r) = (
                    attr(tag, "cx").unwrap(),
                    attr(tag, "cy").unwrap(),
                    attr(tag, "r").unwrap(),
                );
                [cx - r, cy - r, cx + r, cy + r]
            }
            "rect" => {
                let (x, y) = (attr(tag, "x").unwrap(), attr(tag, "y").unwrap());
                [x, y, x + attr(tag, "width").unwrap(), y + attr(tag, "height").unwrap()]
            }
            "polygon" => {
                let pts: Vec<[f64; 2]> = points_re.captures(tag).unwrap()[1]
                    .split_whitespace()
                    .map(|p| {
                        let (x, y) = p.split_once(',').unwrap();
                        [x.parse().unwrap(), y.parse().unwrap()]
                    })
                    .collect();
                let fold = |d: usize, f: fn(f64, f64) -> f64, init: f64| pts.iter().map(|p| p[d]).fold(init, f);
                [
                    fold(0, f64::min, f64::INFINITY),
                    fold(1, f64::min, f64::INFINITY),
                    fold(0, f64::max, f64::NEG_INFINITY),
                    fold(1, f64::max, f64::NEG_INFINITY),
                ]
            }
            _ => {
                let (x, y) = (attr(tag, "x").unwrap(), attr(tag, "y").unwrap());
                [x, y, x, y]
            }
        };
        out.push((kind.to_string(), bbox));
    }
    out
}

/// Every drawn element lies inside the viewBox (3-decimal rounding allowed).
pub fn contained(svg: &str) -> Result<(), String> {
    let [x0, y0, w, h] = view_box(svg);
    let slack = 1e-3;
    for (kind, b) in element_boxes(svg) {
        if b[0] < x0 - slack || b[1] < y0 - slack || b[2] > x0 + w + slack || b[3] > y0 + h + slack {
            return Err(format!("{kind} {b:?} leaves viewBox {:?}", [x0, y0, w, h]));
        }
    }
    Ok(())
}
