//! Canonical text for a model; parsing the output gives the model back.

use std::fmt::Write;

use rtk_core::convex::PointSpec;
use rtk_core::SpecMap;

use crate::model::*;

fn image(f: &SpecMap, i: usize) -> String {
    let img = f.image(i);
    if img.len() == 1 {
        img.labels()[0].to_string()
    } else {
        format!("{{{}}}", img.labels().join(", "))
    }
}

fn points(out: &mut String, p: &PointSpec) {
    for pt in p.points() {
        let row: Vec<String> = pt.coords().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    for (k, item) in m.items.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        match item {
            Item::Space(d) => {
                match &d.name {
                    None => out.push_str("[states]\n"),
                    Some(n) => {
                        let _ = writeln!(out, "[space {n}]");
                    }
                }
                let _ = writeln!(out, "{}", d.space.labels().join(" "));
            }
            Item::Map(d) => {
                match (&d.source, &d.target) {
                    (Some(s), Some(t)) => {
                        let _ = writeln!(out, "[map {} : {s} -> {t}]", d.name);
                    }
                    _ => {
                        let _ = writeln!(out, "[map {}]", d.name);
                    }
                }
                for i in 0..d.map.source().size() {
                    let _ = writeln!(out, "{} -> {}", d.map.source().label(i), image(&d.map, i));
                }
            }
            Item::Monoid(d) => {
                let _ = writeln!(out, "[monoid {}]", d.name);
                if let Some(s) = &d.space_name {
                    let _ = writeln!(out, "space: {s}");
                }
                match &d.source {
                    MonoidSource::Generators(g) => {
                        let _ = writeln!(out, "generators: {}", g.join(" "));
                    }
                    MonoidSource::AllFunctions => out.push_str("@all-functions\n"),
                    MonoidSource::Permutations => out.push_str("@permutations\n"),
                }
                if let Some(c) = d.cap {
                    let _ = writeln!(out, "cap: {c}");
                }
            }
            Item::Lumping(d) => {
                let _ = writeln!(out, "[lumping {}]", d.name);
                if let Some(s) = &d.space_name {
                    let _ = writeln!(out, "space: {s}");
                }
                match &d.source {
                    LumpingSource::Map(m) => {
                        let _ = writeln!(out, "map: {m}");
                    }
                    LumpingSource::Blocks(b) => {
                        let blocks: Vec<String> = b.iter().map(|b| format!("{{{}}}", b.join(", "))).collect();
                        let _ = writeln!(out, "{}", blocks.join(" "));
                    }
                }
            }
            Item::Approx(d) => {
                let _ = writeln!(out, "[approx {}]", d.name);
                if let Some(s) = &d.space_name {
                    let _ = writeln!(out, "space: {s}");
                }
                let _ = writeln!(out, "index: {}", d.labels.join(" "));
                if !d.order.is_empty() {
                    let pairs: Vec<String> = d.order.iter().map(|(a, b)| format!("{a}<{b}")).collect();
                    let _ = writeln!(out, "order: {}", pairs.join(" "));
                }
                let _ = writeln!(out, "top: {}", d.top);
                if let Some(z) = &d.zero {
                    let _ = writeln!(out, "zero: {z}");
                }
                for (e, m) in &d.maps {
                    let _ = writeln!(out, "at {e}: {m}");
                }
                for c in &d.chains {
                    let _ = writeln!(out, "chain: {}", c.members.join(" "));
                    if !c.sums.is_empty() {
                        let sums: Vec<String> = c.sums.iter().map(|(a, b, r)| format!("{a}+{b}={r}")).collect();
                        let _ = writeln!(out, "sum: {}", sums.join(" "));
                    }
                }
            }
            Item::Points(d) => {
                let _ = writeln!(out, "[points {}]", d.name);
                points(&mut out, &d.points);
            }
        }
    }
    out
}
