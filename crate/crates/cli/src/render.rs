//! Plain-text tables.

use credal::Distribution;

fn numeric(c: &str) -> bool {
    let c = c.trim_start_matches('-').trim_start_matches('$');
    c.parse::<f64>().is_ok() || c.replace(' ', "").parse::<f64>().is_ok()
}

/// Columns of numbers and amounts are right-aligned, the rest left-aligned.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let right: Vec<bool> = (0..cols)
        .map(|i| {
            i > 0
                && !rows.is_empty()
                && rows
                    .iter()
                    .all(|r| r.get(i).is_none_or(|c| numeric(c) || c == "-"))
        })
        .collect();
    let line = |r: &[String]| {
        r.iter()
            .enumerate()
            .map(|(i, c)| {
                let pad = " ".repeat(width[i] - c.chars().count());
                if !right[i] {
                    format!("{c}{pad}")
                } else {
                    format!("{pad}{c}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header);
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

pub fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Named distributions as columns, one row per atom.
pub fn distributions(named: &[(&str, &Distribution)]) -> String {
    let Some((_, first)) = named.first() else {
        return String::new();
    };
    let mut header = vec!["atom".to_string()];
    header.extend(named.iter().map(|(n, _)| n.to_string()));
    let rows: Vec<Vec<String>> = first
        .space()
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut r = vec![a.clone()];
            r.extend(named.iter().map(|(_, d)| num(d.get(i))));
            r
        })
        .collect();
    table(&header, &rows)
}

pub fn names(xs: &[impl AsRef<str>]) -> String {
    let v: Vec<&str> = xs.iter().map(AsRef::as_ref).collect();
    format!("{{{}}}", v.join(", "))
}
