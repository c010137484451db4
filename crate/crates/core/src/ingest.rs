//! File ingest: multiplication-table (.mt) and permutation-generator (.pg)
//! formats. Ingested tables run the full validation suite; permutation
//! generators are expanded to the generated group's Cayley table.

use crate::error::{GroupError, Result};
use crate::group::{AssocCheck, Elem, FiniteGroup};
use crate::Caps;
use std::collections::HashMap;
use std::path::Path;

/// Ingest a group from a file, dispatching on the extension (`.mt` or `.pg`).
pub fn ingest(path: &Path, caps: &Caps) -> Result<(FiniteGroup, AssocCheck)> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mt") => read_mt(path, caps),
        Some("pg") => read_pg(path, caps).map(|g| (g, AssocCheck::ByConstruction)),
        other => Err(GroupError::Malformed(format!(
            "unknown group file extension {:?} (expected .mt or .pg)",
            other
        ))),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

/// Multiplication-table file: line 1 = n; next n lines = n space-separated
/// ids; id 0 is the identity; comments start with '#'.
pub fn read_mt(path: &Path, caps: &Caps) -> Result<(FiniteGroup, AssocCheck)> {
    let text = std::fs::read_to_string(path)?;
    parse_mt(&text, &format!("file:{}", path.display()), caps)
}

pub fn parse_mt(text: &str, spec: &str, caps: &Caps) -> Result<(FiniteGroup, AssocCheck)> {
    let mut lines = content_lines(text);
    let n: usize = lines
        .next()
        .ok_or_else(|| GroupError::Malformed("empty .mt file".into()))?
        .parse()
        .map_err(|_| GroupError::Malformed("first line of .mt must be the order".into()))?;
    if n == 0 {
        return Err(GroupError::Malformed("order must be positive".into()));
    }
    if n > caps.order_cap {
        return Err(GroupError::OrderCap {
            order: n,
            cap: caps.order_cap,
        });
    }
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| GroupError::Malformed(format!("missing table row {}", i)))?;
        let row: Vec<Elem> = line
            .split_whitespace()
            .map(|t| t.parse::<Elem>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| GroupError::Malformed(format!("bad entry in row {}", i)))?;
        if row.len() != n {
            return Err(GroupError::Malformed(format!(
                "row {} has {} entries, expected {}",
                i,
                row.len(),
                n
            )));
        }
        table.extend(row);
    }
    FiniteGroup::from_table_checked(n, table, spec.to_string(), caps.assoc_exhaustive_limit)
}

/// Render a group back to the .mt format.
pub fn write_mt(g: &FiniteGroup) -> String {
    let n = g.order();
    let mut out = format!("# {}\n{}\n", g.spec(), n);
    for a in 0..n {
        let row: Vec<String> = (0..n)
            .map(|b| g.mul(a as Elem, b as Elem).to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Permutation-generator file: line 1 = degree d; following lines = one
/// generator per line in disjoint-cycle notation over 1..d.
pub fn read_pg(path: &Path, caps: &Caps) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    parse_pg(&text, &format!("file:{}", path.display()), caps)
}

pub fn parse_pg(text: &str, spec: &str, caps: &Caps) -> Result<FiniteGroup> {
    let mut lines = content_lines(text);
    let degree: usize = lines
        .next()
        .ok_or_else(|| GroupError::Malformed("empty .pg file".into()))?
        .parse()
        .map_err(|_| GroupError::Malformed("first line of .pg must be the degree".into()))?;
    if degree == 0 || degree > 1 << 14 {
        return Err(GroupError::Malformed(format!("bad degree {}", degree)));
    }
    let mut gens: Vec<Vec<u16>> = Vec::new();
    for line in lines {
        gens.push(parse_cycles(line, degree)?);
    }
    // expand by closure under composition
    let identity: Vec<u16> = (0..degree as u16).collect();
    let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut elems: Vec<Vec<u16>> = vec![identity.clone()];
    index.insert(identity, 0);
    let mut i = 0;
    while i < elems.len() {
        let cur = elems[i].clone();
        for g in &gens {
            let prod: Vec<u16> = cur.iter().map(|&x| g[x as usize]).collect();
            if !index.contains_key(&prod) {
                if elems.len() >= caps.order_cap {
                    return Err(GroupError::OrderCap {
                        order: elems.len() + 1,
                        cap: caps.order_cap,
                    });
                }
                index.insert(prod.clone(), elems.len());
                elems.push(prod);
            }
        }
        i += 1;
    }
    // renumber: identity first, the rest in lex order (identity is lex-minimal)
    elems.sort_unstable();
    let index: HashMap<&[u16], usize> = elems
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let m = elems.len();
    let mut table = vec![0 as Elem; m * m];
    let mut buf = vec![0u16; degree];
    for a in 0..m {
        for b in 0..m {
            for x in 0..degree {
                buf[x] = elems[a][elems[b][x] as usize];
            }
            table[a * m + b] = index[buf.as_slice()] as Elem;
        }
    }
    Ok(FiniteGroup::from_table_trusted(m, table, spec.to_string()))
}

/// Parse "(1 2 3)(4 5)" over 1..=degree into a 0-indexed permutation.
fn parse_cycles(line: &str, degree: usize) -> Result<Vec<u16>> {
    let mut perm: Vec<u16> = (0..degree as u16).collect();
    let mut rest = line.trim();
    if rest == "()" {
        return Ok(perm);
    }
    let mut touched = vec![false; degree];
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| GroupError::Malformed(format!("expected '(' in '{}'", line)))?;
        let close = rest[open..]
            .find(')')
            .ok_or_else(|| GroupError::Malformed(format!("unclosed cycle in '{}'", line)))?
            + open;
        let body = &rest[open + 1..close];
        let pts: Vec<usize> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| GroupError::Malformed(format!("bad cycle point in '{}'", line)))?;
        for &p in &pts {
            if p == 0 || p > degree {
                return Err(GroupError::Malformed(format!(
                    "cycle point {} out of range 1..={}",
                    p, degree
                )));
            }
            if touched[p - 1] {
                return Err(GroupError::Malformed(format!(
                    "point {} appears twice in '{}'",
                    p, line
                )));
            }
            touched[p - 1] = true;
        }
        for w in 0..pts.len() {
            let from = pts[w] - 1;
            let to = pts[(w + 1) % pts.len()] - 1;
            perm[from] = to as u16;
        }
        rest = rest[close + 1..].trim();
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::find_isomorphism;
    use crate::spec::GroupSpec;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn mt_roundtrip_c2() {
        let text = "# order two\n2\n0 1\n1 0\n";
        let (g, mode) = parse_mt(text, "test", &caps()).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(mode, AssocCheck::Exhaustive);
    }

    #[test]
    fn mt_rejects_non_associative_latin_square() {
        // a Latin square with identity at 0 that is not associative
        // (rows: this is the "RPS-like" quasigroup padded with identity)
        let text = "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        let err = parse_mt(text, "test", &caps());
        match err {
            Err(GroupError::InvalidTable(msg)) => {
                assert!(msg.contains("associativity") || msg.contains("inverse") || msg.contains("order"),
                    "unexpected message: {}", msg);
            }
            other => panic!("expected InvalidTable, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn mt_rejects_associativity_failure() {
        // Start from a real group table and swap a Latin-square intercalate;
        // find one whose damage survives the cheap checks so the cubic loop
        // is what rejects it.
        let g = GroupSpec::parse("C6").unwrap().build(&caps()).unwrap();
        let n = g.order();
        let base: Vec<u16> = g.table().to_vec();
        let mut hit_assoc = false;
        'outer: for r1 in 1..n {
            for r2 in r1 + 1..n {
                for c1 in 1..n {
                    for c2 in c1 + 1..n {
                        let (a, b) = (base[r1 * n + c1], base[r1 * n + c2]);
                        let (c, d) = (base[r2 * n + c1], base[r2 * n + c2]);
                        if a != d || b != c || a == b {
                            continue;
                        }
                        let mut t = base.clone();
                        t[r1 * n + c1] = b;
                        t[r1 * n + c2] = a;
                        t[r2 * n + c1] = a;
                        t[r2 * n + c2] = b;
                        match crate::group::FiniteGroup::from_table_checked(n, t, "x".into(), 256)
                        {
                            Err(GroupError::InvalidTable(msg))
                                if msg.contains("associativity") =>
                            {
                                hit_assoc = true;
                                break 'outer;
                            }
                            Err(_) => {}
                            Ok(_) => panic!("intercalate swap accepted as a group"),
                        }
                    }
                }
            }
        }
        assert!(hit_assoc, "no intercalate produced an associativity rejection");
    }

    #[test]
    fn mt_rejects_bad_identity_and_shape() {
        assert!(parse_mt("2\n1 0\n0 1\n", "t", &caps()).is_err());
        assert!(parse_mt("3\n0 1 2\n1 2 0\n", "t", &caps()).is_err());
        assert!(parse_mt("2\n0 1\n1 2\n", "t", &caps()).is_err());
    }

    #[test]
    fn pg_dihedral_8_from_generators() {
        let text = "4\n(1 2 3 4)\n(1 3)\n";
        let g = parse_pg(text, "test", &caps()).unwrap();
        assert_eq!(g.order(), 8);
        let d8 = GroupSpec::parse("Dih4").unwrap().build(&caps()).unwrap();
        assert!(find_isomorphism(&g, &d8).is_some());
    }

    #[test]
    fn pg_identity_only() {
        let g = parse_pg("3\n()\n", "test", &caps()).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn pg_rejects_out_of_range_points() {
        assert!(parse_pg("3\n(1 4)\n", "test", &caps()).is_err());
        assert!(parse_pg("3\n(1 1)\n", "test", &caps()).is_err());
    }

    #[test]
    fn roundtrip_via_write_mt() {
        let g = GroupSpec::parse("Dic3").unwrap().build(&caps()).unwrap();
        let text = write_mt(&g);
        let (h, _) = parse_mt(&text, "again", &caps()).unwrap();
        assert_eq!(g.table(), h.table());
    }
}
