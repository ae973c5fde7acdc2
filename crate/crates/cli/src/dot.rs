//! DOT export of finite orders.

use std::fmt::Write;

/// A digraph of the covering pairs of `le` (an order on `labels`), so the
/// output is transitively reduced whatever relation is passed in.
pub fn export_dot(title: &str, labels: &[String], le: impl Fn(usize, usize) -> bool) -> String {
    let n = labels.len();
    let lt = |a: usize, b: usize| a != b && le(a, b) && !le(b, a);
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(title));
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(l));
    }
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                let _ = writeln!(out, "  n{a} -> n{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(d: &str) -> usize {
        d.matches("->").count()
    }

    #[test]
    fn reduced_orders() {
        let two = export_dot("q", &["a".into(), "b".into()], |a, b| a <= b);
        assert_eq!(edges(&two), 1);
        assert_eq!(edges(&export_dot("one", &["x".into()], |_, _| true)), 0);
        let diamond: Vec<String> = ["0", "a", "b", "1"].iter().map(|s| s.to_string()).collect();
        let le = |a: usize, b: usize| a == b || a == 0 || b == 3;
        assert_eq!(edges(&export_dot("d", &diamond, le)), 4);
        let chain: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        assert_eq!(edges(&export_dot("c", &chain, |a, b| a <= b)), 4);
    }
}
