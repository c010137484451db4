//! The group constructor algebra: a closed grammar of group expressions that
//! build deterministic multiplication tables, plus the parser for the CLI /
//! catalog-key syntax.
//!
//! Element numbering is fixed per family so that ids in reports are
//! reproducible:
//! - cyclic `C n`: k ↦ k
//! - units `U n`: residues coprime to n, ascending (residue 1 at id 0)
//! - elementary abelian `E p^k`: tuples over Z_p in row-major order
//! - dihedral `Dih n` (order 2n): rotations 0..n-1, then reflections r^i·s
//! - dicyclic `Dic n` (order 4n): a^i for i < 2n, then a^i·x
//! - symmetric / alternating: permutation words in lexicographic order
//! - Heisenberg `He p` (order p³): triples (a,b,c) row-major
//! - SL(2,3): identity matrix first, remaining matrices by entry order
//! - products and semidirect products: row-major over (left index, right index)
//! - wreath `wr2(A)` (order 2|A|²): swap bit high, base pair row-major below

use crate::error::{GroupError, Result};
use crate::group::{Elem, FiniteGroup};
use crate::Caps;
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

/// How the elements of a semidirect factor act: from an explicit action file,
/// or the i-th homomorphism in the deterministic enumeration used by the
/// catalog builder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionSource {
    File(PathBuf),
    Ordinal(usize),
}

/// A constructor-algebra expression naming how a group is built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    Units(u32),
    ElementaryAbelian(u32, u32),
    Dihedral(u32),
    Dicyclic(u32),
    Symmetric(u32),
    Alternating(u32),
    Heisenberg(u32),
    Sl23,
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Wreath2(Box<GroupSpec>),
    Semidirect(Box<GroupSpec>, Box<GroupSpec>, ActionSource),
    File(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{}", n),
            GroupSpec::Units(n) => write!(f, "U{}", n),
            GroupSpec::ElementaryAbelian(p, k) => write!(f, "E{}^{}", p, k),
            GroupSpec::Dicyclic(2) => write!(f, "Q8"),
            GroupSpec::Dicyclic(4) => write!(f, "Q16"),
            GroupSpec::Dihedral(n) => write!(f, "Dih{}", n),
            GroupSpec::Dicyclic(n) => write!(f, "Dic{}", n),
            GroupSpec::Symmetric(n) => write!(f, "S{}", n),
            GroupSpec::Alternating(n) => write!(f, "A{}", n),
            GroupSpec::Heisenberg(p) => write!(f, "He{}", p),
            GroupSpec::Sl23 => write!(f, "SL23"),
            GroupSpec::Product(a, b) => write!(f, "{} x {}", a, b),
            GroupSpec::Wreath2(a) => write!(f, "wr2({})", a),
            GroupSpec::Semidirect(n, k, ActionSource::File(p)) => {
                write!(f, "sd({}, {}, {})", n, k, p.display())
            }
            GroupSpec::Semidirect(n, k, ActionSource::Ordinal(i)) => {
                write!(f, "sd#{}({}, {})", i, n, k)
            }
            GroupSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl GroupSpec {
    /// Parse the CLI / catalog-key grammar. `x` is the (left-associative)
    /// direct product; everything else is an atom.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let parts = split_top_level(s.trim())?;
        let mut specs = parts
            .into_iter()
            .map(|p| Self::parse_atom(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        if specs.is_empty() {
            return Err(GroupError::SpecParse("empty spec".into()));
        }
        let mut acc = specs.remove(0);
        for rhs in specs {
            acc = GroupSpec::Product(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn parse_atom(s: &str) -> Result<GroupSpec> {
        let err = || GroupError::SpecParse(format!("cannot parse '{}'", s));
        if s.starts_with('(') && s.ends_with(')') {
            return Self::parse(&s[1..s.len() - 1]);
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(GroupSpec::File(PathBuf::from(rest)));
        }
        if s == "SL23" {
            return Ok(GroupSpec::Sl23);
        }
        if s == "Q8" {
            return Ok(GroupSpec::Dicyclic(2));
        }
        if s == "Q16" {
            return Ok(GroupSpec::Dicyclic(4));
        }
        if let Some(body) = strip_call(s, "wr2") {
            return Ok(GroupSpec::Wreath2(Box::new(Self::parse(body)?)));
        }
        if s.starts_with("sd#") {
            let open = s.find('(').ok_or_else(err)?;
            let i: usize = s[3..open].parse().map_err(|_| err())?;
            let body = s[open + 1..].strip_suffix(')').ok_or_else(err)?;
            let args = split_args(body)?;
            if args.len() != 2 {
                return Err(err());
            }
            return Ok(GroupSpec::Semidirect(
                Box::new(Self::parse(&args[0])?),
                Box::new(Self::parse(&args[1])?),
                ActionSource::Ordinal(i),
            ));
        }
        if let Some(body) = strip_call(s, "sd") {
            let args = split_args(body)?;
            if args.len() != 3 {
                return Err(GroupError::SpecParse(format!(
                    "sd takes (N, K, actionfile): '{}'",
                    s
                )));
            }
            return Ok(GroupSpec::Semidirect(
                Box::new(Self::parse(&args[0])?),
                Box::new(Self::parse(&args[1])?),
                ActionSource::File(PathBuf::from(args[2].trim())),
            ));
        }
        for (prefix, ctor) in [
            ("Dih", GroupSpec::Dihedral as fn(u32) -> GroupSpec),
            ("Dic", GroupSpec::Dicyclic),
            ("He", GroupSpec::Heisenberg),
            ("C", GroupSpec::Cyclic),
            ("U", GroupSpec::Units),
            ("S", GroupSpec::Symmetric),
            ("A", GroupSpec::Alternating),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                if prefix == "E" {
                    continue;
                }
                if let Ok(n) = rest.parse::<u32>() {
                    return Ok(ctor(n));
                }
            }
        }
        if let Some(rest) = s.strip_prefix('E') {
            if let Some((p, k)) = rest.split_once('^') {
                if let (Ok(p), Ok(k)) = (p.parse::<u32>(), k.parse::<u32>()) {
                    return Ok(GroupSpec::ElementaryAbelian(p, k));
                }
            }
        }
        Err(err())
    }

    /// Order the built group will have, without building it.
    pub fn order(&self) -> Option<u64> {
        Some(match self {
            GroupSpec::Cyclic(n) => *n as u64,
            GroupSpec::Units(n) => totient(*n) as u64,
            GroupSpec::ElementaryAbelian(p, k) => (*p as u64).checked_pow(*k)?,
            GroupSpec::Dihedral(n) => 2 * *n as u64,
            GroupSpec::Dicyclic(n) => 4 * *n as u64,
            GroupSpec::Symmetric(n) => factorial(*n)?,
            GroupSpec::Alternating(n) => {
                let f = factorial(*n)?;
                if *n <= 2 {
                    1
                } else {
                    f / 2
                }
            }
            GroupSpec::Heisenberg(p) => (*p as u64).checked_pow(3)?,
            GroupSpec::Sl23 => 24,
            GroupSpec::Product(a, b) => a.order()?.checked_mul(b.order()?)?,
            GroupSpec::Wreath2(a) => {
                let m = a.order()?;
                2u64.checked_mul(m.checked_mul(m)?)?
            }
            GroupSpec::Semidirect(n, k, _) => n.order()?.checked_mul(k.order()?)?,
            GroupSpec::File(_) => return None,
        })
    }

    /// Build the group; deterministic element numbering per family.
    pub fn build(&self, caps: &Caps) -> Result<FiniteGroup> {
        if let Some(o) = self.order() {
            if o as usize > caps.order_cap || o == 0 {
                return Err(GroupError::OrderCap {
                    order: o as usize,
                    cap: caps.order_cap,
                });
            }
        }
        let spec_str = self.to_string();
        let mut g = match self {
            GroupSpec::Cyclic(n) => cyclic(*n as usize),
            GroupSpec::Units(n) => units(*n as usize)?,
            GroupSpec::ElementaryAbelian(p, k) => elementary_abelian(*p, *k)?,
            GroupSpec::Dihedral(n) => dihedral(*n as usize),
            GroupSpec::Dicyclic(n) => dicyclic(*n as usize),
            GroupSpec::Symmetric(n) => symmetric(*n as usize),
            GroupSpec::Alternating(n) => alternating(*n as usize),
            GroupSpec::Heisenberg(p) => heisenberg(*p)?,
            GroupSpec::Sl23 => sl23(),
            GroupSpec::Product(a, b) => {
                let (ga, gb) = (a.build(caps)?, b.build(caps)?);
                direct_product(&ga, &gb, caps)?
            }
            GroupSpec::Wreath2(a) => wreath_with_c2(&a.build(caps)?, caps)?,
            GroupSpec::Semidirect(n, k, src) => {
                let (gn, gk) = (n.build(caps)?, k.build(caps)?);
                let action = match src {
                    ActionSource::File(path) => read_action_file(path, &gn, &gk)?,
                    ActionSource::Ordinal(i) => {
                        crate::iso::nth_action(&gn, &gk, *i, caps)?
                    }
                };
                semidirect_product(&gn, &gk, &action, caps)?
            }
            GroupSpec::File(path) => {
                let (g, _) = crate::ingest::ingest(path, caps)?;
                g
            }
        };
        g.set_spec(spec_str);
        Ok(g)
    }
}

fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
}

/// Split on top-level " x " (depth 0 w.r.t. parentheses).
fn split_top_level(s: &str) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' if depth == 0
                && i > 0
                && chars[i - 1] == ' '
                && i + 1 < chars.len()
                && chars[i + 1] == ' ' =>
            {
                parts.push(cur.trim().to_string());
                cur.clear();
                i += 1;
                continue;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(GroupError::SpecParse("unbalanced parentheses".into()));
        }
        cur.push(c);
        i += 1;
    }
    if depth != 0 {
        return Err(GroupError::SpecParse("unbalanced parentheses".into()));
    }
    parts.push(cur.trim().to_string());
    Ok(parts)
}

/// Split "a, b, c" at top level.
fn split_args(s: &str) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    parts.push(cur.trim().to_string());
    Ok(parts)
}

fn factorial(n: u32) -> Option<u64> {
    let mut f = 1u64;
    for i in 2..=n as u64 {
        f = f.checked_mul(i)?;
    }
    Some(f)
}

fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| crate::group::gcd(k, n) == 1).count() as u32
}

// --- family constructors ---

pub fn trivial() -> FiniteGroup {
    cyclic(1)
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let mut table = vec![0 as Elem; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as Elem;
        }
    }
    FiniteGroup::from_table_trusted(n, table, format!("C{}", n))
}

/// Multiplicative group of residues coprime to `n`, listed ascending.
pub fn units(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(GroupError::SpecParse("U0 is not a group".into()));
    }
    let residues: Vec<usize> = (1..=n.max(1))
        .filter(|&k| crate::group::gcd(k as u32, n as u32) == 1)
        .collect();
    let residues = if n == 1 { vec![1] } else { residues };
    let m = residues.len();
    let mut index = HashMap::new();
    for (i, &r) in residues.iter().enumerate() {
        index.insert(r, i);
    }
    let mut table = vec![0 as Elem; m * m];
    for i in 0..m {
        for j in 0..m {
            let p = residues[i] * residues[j] % n.max(1);
            let p = if n == 1 { 1 } else { p };
            table[i * m + j] = index[&p] as Elem;
        }
    }
    Ok(FiniteGroup::from_table_trusted(m, table, format!("U{}", n)))
}

pub fn elementary_abelian(p: u32, k: u32) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(GroupError::SpecParse(format!("E{}^{}: {} is not prime", p, k, p)));
    }
    let n = (p as usize).pow(k);
    let p = p as usize;
    let k = k as usize;
    let mut table = vec![0 as Elem; n * n];
    for a in 0..n {
        for b in 0..n {
            // digit-wise addition mod p, row-major digits
            let (mut x, mut y, mut z, mut w) = (a, b, 0usize, 1usize);
            let mut digits = vec![0usize; k];
            for d in (0..k).rev() {
                digits[d] = (x % p + y % p) % p;
                x /= p;
                y /= p;
            }
            for d in (0..k).rev() {
                z += digits[d] * w;
                w *= p;
            }
            table[a * n + b] = z as Elem;
        }
    }
    Ok(FiniteGroup::from_table_trusted(
        n,
        table,
        format!("E{}^{}", p, k),
    ))
}

/// Dihedral group of order 2n: rotations r^i at ids 0..n, reflections r^i·s at n..2n.
pub fn dihedral(n: usize) -> FiniteGroup {
    let m = 2 * n;
    let mut table = vec![0 as Elem; m * m];
    let rot = |i: usize| i % n;
    for a in 0..m {
        for b in 0..m {
            let v = match (a < n, b < n) {
                (true, true) => rot(a + b),
                (true, false) => n + rot(a + (b - n)),
                (false, true) => n + rot((a - n) + n - rot(b)),
                (false, false) => rot((a - n) + n - (b - n)),
            };
            table[a * m + b] = v as Elem;
        }
    }
    FiniteGroup::from_table_trusted(m, table, format!("Dih{}", n))
}

/// Dicyclic group of order 4n: ⟨a, x | a^{2n} = 1, x² = aⁿ, xax⁻¹ = a⁻¹⟩.
/// Ids 0..2n are a^i, ids 2n..4n are a^i·x.
pub fn dicyclic(n: usize) -> FiniteGroup {
    let two_n = 2 * n;
    let m = 4 * n;
    let mut table = vec![0 as Elem; m * m];
    let r = |i: usize| i % two_n;
    for a in 0..m {
        for b in 0..m {
            let v = match (a < two_n, b < two_n) {
                // a^i · a^j
                (true, true) => r(a + b),
                // a^i · (a^j x) = a^{i+j} x
                (true, false) => two_n + r(a + (b - two_n)),
                // (a^i x) · a^j = a^{i-j} x
                (false, true) => two_n + r((a - two_n) + two_n - r(b)),
                // (a^i x)(a^j x) = a^{i-j} x² = a^{i-j+n}
                (false, false) => r((a - two_n) + two_n - (b - two_n) + n),
            };
            table[a * m + b] = v as Elem;
        }
    }
    FiniteGroup::from_table_trusted(m, table, format!("Dic{}", n))
}

fn permutations_lex(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    if n == 0 {
        out = vec![vec![]];
    }
    out
}

fn perm_parity(p: &[u8]) -> bool {
    // true = even
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn perm_group(perms: Vec<Vec<u8>>, spec: String) -> FiniteGroup {
    let m = perms.len();
    let mut index: HashMap<&[u8], usize> = HashMap::new();
    for (i, p) in perms.iter().enumerate() {
        index.insert(p.as_slice(), i);
    }
    let mut table = vec![0 as Elem; m * m];
    let deg = perms.first().map(|p| p.len()).unwrap_or(0);
    let mut buf = vec![0u8; deg];
    for i in 0..m {
        for j in 0..m {
            // (σ·τ)(x) = σ(τ(x))
            for x in 0..deg {
                buf[x] = perms[i][perms[j][x] as usize];
            }
            table[i * m + j] = index[buf.as_slice()] as Elem;
        }
    }
    FiniteGroup::from_table_trusted(m, table, spec)
}

/// Symmetric group on n letters; elements are permutation words in lex order
/// (which puts the identity at id 0).
pub fn symmetric(n: usize) -> FiniteGroup {
    perm_group(permutations_lex(n), format!("S{}", n))
}

pub fn alternating(n: usize) -> FiniteGroup {
    let perms: Vec<Vec<u8>> = permutations_lex(n)
        .into_iter()
        .filter(|p| perm_parity(p))
        .collect();
    perm_group(perms, format!("A{}", n))
}

/// Heisenberg group of order p³: triples (a, b, c) with
/// (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b').
pub fn heisenberg(p: u32) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(GroupError::SpecParse(format!("He{}: not prime", p)));
    }
    let p = p as usize;
    let n = p * p * p;
    let idx = |a: usize, b: usize, c: usize| (a * p + b) * p + c;
    let mut table = vec![0 as Elem; n * n];
    for a1 in 0..p {
        for b1 in 0..p {
            for c1 in 0..p {
                let i = idx(a1, b1, c1);
                for a2 in 0..p {
                    for b2 in 0..p {
                        for c2 in 0..p {
                            let j = idx(a2, b2, c2);
                            let v = idx((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p);
                            table[i * n + j] = v as Elem;
                        }
                    }
                }
            }
        }
    }
    Ok(FiniteGroup::from_table_trusted(n, table, format!("He{}", p)))
}

/// SL(2,3): the 24 matrices over GF(3) with determinant 1, identity first and
/// the rest ordered by their entry tuple (a, b, c, d).
pub fn sl23() -> FiniteGroup {
    let mut mats: Vec<[u8; 4]> = Vec::new();
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                for d in 0..3u8 {
                    if (3 + a * d % 3 + 3 - b * c % 3) % 3 == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let id_pos = mats.iter().position(|m| *m == [1, 0, 0, 1]).unwrap();
    mats.swap(0, id_pos);
    mats[1..].sort_unstable();
    let m = mats.len();
    debug_assert_eq!(m, 24);
    let mut index = HashMap::new();
    for (i, mt) in mats.iter().enumerate() {
        index.insert(*mt, i);
    }
    let mut table = vec![0 as Elem; m * m];
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (mats[i], mats[j]);
            let prod = [
                (x[0] * y[0] + x[1] * y[2]) % 3,
                (x[0] * y[1] + x[1] * y[3]) % 3,
                (x[2] * y[0] + x[3] * y[2]) % 3,
                (x[2] * y[1] + x[3] * y[3]) % 3,
            ];
            table[i * m + j] = index[&prod] as Elem;
        }
    }
    FiniteGroup::from_table_trusted(m, table, "SL23".into())
}

/// Componentwise product; element (i, j) gets id i·|h| + j.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, caps: &Caps) -> Result<FiniteGroup> {
    let n = g.order() * h.order();
    if n > caps.order_cap {
        return Err(GroupError::OrderCap {
            order: n,
            cap: caps.order_cap,
        });
    }
    let (no, ho) = (g.order(), h.order());
    let mut table = vec![0 as Elem; n * n];
    for a1 in 0..no {
        for b1 in 0..ho {
            let i = a1 * ho + b1;
            for a2 in 0..no {
                for b2 in 0..ho {
                    let j = a2 * ho + b2;
                    let v = g.mul(a1 as Elem, a2 as Elem) as usize * ho
                        + h.mul(b1 as Elem, b2 as Elem) as usize;
                    table[i * n + j] = v as Elem;
                }
            }
        }
    }
    Ok(FiniteGroup::from_table_trusted(
        n,
        table,
        format!("{} x {}", g.spec(), h.spec()),
    ))
}

/// `(a, x)(b, y) = (a · action(x)(b), xy)`. The action must be a homomorphism
/// from `k` into the automorphisms of `n`; this is verified.
pub fn semidirect_product(
    n: &FiniteGroup,
    k: &FiniteGroup,
    action: &[Vec<Elem>],
    caps: &Caps,
) -> Result<FiniteGroup> {
    let (no, ko) = (n.order(), k.order());
    if action.len() != ko {
        return Err(GroupError::BadAction(format!(
            "action defines {} maps, expected {}",
            action.len(),
            ko
        )));
    }
    for (x, phi) in action.iter().enumerate() {
        if phi.len() != no {
            return Err(GroupError::BadAction(format!(
                "action of k-element {} has wrong degree",
                x
            )));
        }
        // automorphism check: bijective homomorphism fixing 0
        let mut seen = vec![false; no];
        for &v in phi {
            if (v as usize) >= no || seen[v as usize] {
                return Err(GroupError::BadAction(format!(
                    "action of k-element {} is not a permutation",
                    x
                )));
            }
            seen[v as usize] = true;
        }
        if phi[0] != 0 {
            return Err(GroupError::BadAction(format!(
                "action of k-element {} does not fix the identity",
                x
            )));
        }
        for a in 0..no as Elem {
            for b in 0..no as Elem {
                if phi[n.mul(a, b) as usize] != n.mul(phi[a as usize], phi[b as usize]) {
                    return Err(GroupError::BadAction(format!(
                        "action of k-element {} is not a homomorphism on n",
                        x
                    )));
                }
            }
        }
    }
    // homomorphism check: action(xy) = action(x) ∘ action(y)
    for x in 0..ko as Elem {
        for y in 0..ko as Elem {
            let xy = k.mul(x, y) as usize;
            for a in 0..no {
                if action[xy][a] != action[x as usize][action[y as usize][a] as usize] {
                    return Err(GroupError::BadAction(
                        "action is not a homomorphism from k".into(),
                    ));
                }
            }
        }
    }
    let m = no * ko;
    if m > caps.order_cap {
        return Err(GroupError::OrderCap {
            order: m,
            cap: caps.order_cap,
        });
    }
    let mut table = vec![0 as Elem; m * m];
    for a in 0..no {
        for x in 0..ko {
            let i = a * ko + x;
            for b in 0..no {
                for y in 0..ko {
                    let j = b * ko + y;
                    let nb = action[x][b] as usize;
                    let v = n.mul(a as Elem, nb as Elem) as usize * ko
                        + k.mul(x as Elem, y as Elem) as usize;
                    table[i * m + j] = v as Elem;
                }
            }
        }
    }
    Ok(FiniteGroup::from_table_trusted(
        m,
        table,
        format!("sd({}, {})", n.spec(), k.spec()),
    ))
}

/// Wreath product A ≀ Z₂ of order 2|A|²: base A × A extended by the
/// coordinate swap. Element (f₀, f₁; ε) gets id ε·|A|² + f₀·|A| + f₁.
pub fn wreath_with_c2(a: &FiniteGroup, caps: &Caps) -> Result<FiniteGroup> {
    let m = a.order();
    let n = 2 * m * m;
    if n > caps.order_cap {
        return Err(GroupError::OrderCap {
            order: n,
            cap: caps.order_cap,
        });
    }
    let idx = |f0: usize, f1: usize, e: usize| e * m * m + f0 * m + f1;
    let mut table = vec![0 as Elem; n * n];
    for f0 in 0..m {
        for f1 in 0..m {
            for e in 0..2usize {
                let i = idx(f0, f1, e);
                for g0 in 0..m {
                    for g1 in 0..m {
                        for d in 0..2usize {
                            let j = idx(g0, g1, d);
                            // (f, ε)(g, δ) = (h, ε+δ) with h(t) = f(t)·g(ε(t))
                            let (h0, h1) = if e == 0 {
                                (
                                    a.mul(f0 as Elem, g0 as Elem),
                                    a.mul(f1 as Elem, g1 as Elem),
                                )
                            } else {
                                (
                                    a.mul(f0 as Elem, g1 as Elem),
                                    a.mul(f1 as Elem, g0 as Elem),
                                )
                            };
                            table[i * n + j] =
                                idx(h0 as usize, h1 as usize, (e + d) % 2) as Elem;
                        }
                    }
                }
            }
        }
    }
    Ok(FiniteGroup::from_table_trusted(
        n,
        table,
        format!("wr2({})", a.spec()),
    ))
}

/// Action file: one line per element of K, `<k_id>: <image of 0> <image of 1> ...`,
/// each line a permutation of N's ids. Comments start with '#'.
fn read_action_file(path: &PathBuf, n: &FiniteGroup, k: &FiniteGroup) -> Result<Vec<Vec<Elem>>> {
    let text = std::fs::read_to_string(path)?;
    let mut action: Vec<Option<Vec<Elem>>> = vec![None; k.order()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line.split_once(':').ok_or_else(|| {
            GroupError::Malformed(format!("action file line {}: missing ':'", lineno + 1))
        })?;
        let kid: usize = lhs.trim().parse().map_err(|_| {
            GroupError::Malformed(format!("action file line {}: bad k id", lineno + 1))
        })?;
        if kid >= k.order() {
            return Err(GroupError::Malformed(format!(
                "action file line {}: k id {} out of range",
                lineno + 1,
                kid
            )));
        }
        let perm: Vec<Elem> = rhs
            .split_whitespace()
            .map(|t| t.parse::<Elem>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                GroupError::Malformed(format!("action file line {}: bad image", lineno + 1))
            })?;
        if perm.len() != n.order() {
            return Err(GroupError::Malformed(format!(
                "action file line {}: expected {} images",
                lineno + 1,
                n.order()
            )));
        }
        action[kid] = Some(perm);
    }
    action
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| GroupError::Malformed(format!("action missing for k id {}", i)))
        })
        .collect()
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::find_isomorphism;

    fn caps() -> Caps {
        Caps::default()
    }

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build(&caps()).unwrap()
    }

    #[test]
    fn parse_roundtrip() {
        for s in [
            "C12",
            "U8",
            "E2^3",
            "Dih6",
            "Dic3",
            "Q8",
            "Q16",
            "S4",
            "A5",
            "He3",
            "SL23",
            "C8 x C3",
            "wr2(C4)",
            "C2 x C2 x C2",
            "sd#3(Q8, C3)",
        ] {
            let spec = GroupSpec::parse(s).unwrap();
            assert_eq!(spec.to_string(), s, "roundtrip of {}", s);
            assert_eq!(GroupSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "Z5", "C", "E4", "sd(C2)", "((C2)"] {
            assert!(GroupSpec::parse(s).is_err(), "should reject '{}'", s);
        }
    }

    #[test]
    fn trivial_group_from_c1() {
        let g = build("C1");
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn s4_has_nine_involutions() {
        // brute-force count over all 24 permutations
        let g = build("S4");
        assert_eq!(g.order(), 24);
        let invol = g.elements().filter(|&x| g.order_of(x) == 2).count();
        assert_eq!(invol, 9);
    }

    #[test]
    fn wreath_order_is_twice_square() {
        let g = build("wr2(C4)");
        assert_eq!(g.order(), 32);
        let t = GroupSpec::parse("wr2(C1)").unwrap().build(&caps()).unwrap();
        assert!(find_isomorphism(&t, &build("C2")).is_some());
    }

    #[test]
    fn wreath_c2_is_dihedral_8() {
        let g = build("wr2(C2)");
        assert!(find_isomorphism(&g, &build("Dih4")).is_some());
    }

    #[test]
    fn direct_product_examples() {
        let c24 = build("C8 x C3");
        assert!(find_isomorphism(&c24, &build("C24")).is_some());
        let h = build("C1 x Dih3");
        assert!(find_isomorphism(&h, &build("Dih3")).is_some());
        let k4 = build("C2 x C2");
        assert_eq!(k4.exponent(), 2);
        assert_eq!(k4.order(), 4);
    }

    #[test]
    fn semidirect_with_inversion_is_dihedral() {
        let n = build("C3");
        let k = build("C2");
        // action: k generator inverts C3
        let action = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let g = semidirect_product(&n, &k, &action, &caps()).unwrap();
        assert!(find_isomorphism(&g, &build("Dih3")).is_some());
    }

    #[test]
    fn semidirect_trivial_action_is_direct_product() {
        let n = build("C5");
        let k = build("C4");
        let action = vec![(0..5).collect::<Vec<Elem>>(); 4];
        let g = semidirect_product(&n, &k, &action, &caps()).unwrap();
        let p = direct_product(&n, &k, &caps()).unwrap();
        assert_eq!(g.table(), p.table());
    }

    #[test]
    fn semidirect_rejects_bad_action() {
        let n = build("C4");
        let k = build("C2");
        // swap of two non-identity elements that is not an automorphism
        let action = vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]];
        assert!(matches!(
            semidirect_product(&n, &k, &action, &caps()),
            Err(GroupError::BadAction(_))
        ));
    }

    #[test]
    fn q8_aliases_dic2() {
        let q8 = build("Q8");
        assert_eq!(q8.order(), 8);
        assert_eq!(q8.elements().filter(|&x| q8.order_of(x) == 2).count(), 1);
    }

    #[test]
    fn sl23_properties() {
        let g = build("SL23");
        assert_eq!(g.order(), 24);
        // unique involution (the -I matrix)
        assert_eq!(g.elements().filter(|&x| g.order_of(x) == 2).count(), 1);
    }

    #[test]
    fn heisenberg_is_nonabelian_of_exponent_p() {
        let g = build("He3");
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 3);
    }

    #[test]
    fn units_groups() {
        let u8g = build("U8");
        assert_eq!(u8g.order(), 4);
        assert_eq!(u8g.exponent(), 2);
        let u5 = build("U5");
        assert!(find_isomorphism(&u5, &build("C4")).is_some());
    }

    #[test]
    fn build_is_deterministic() {
        for s in ["S4", "wr2(C3)", "Dic4", "He3"] {
            let a = build(s);
            let b = build(s);
            assert_eq!(a.table(), b.table());
        }
    }

    #[test]
    fn order_cap_enforced() {
        let err = GroupSpec::parse("C1000").unwrap().build(&caps());
        assert!(matches!(err, Err(GroupError::OrderCap { .. })));
    }

    #[test]
    fn dicyclic_presentation_holds() {
        let g = build("Dic3");
        assert_eq!(g.order(), 12);
        let a = 1 as Elem; // a
        let x = 6 as Elem; // x (id 2n)
        assert_eq!(g.order_of(a), 6);
        assert_eq!(g.mul(x, x), g.mul(a, g.mul(a, a))); // x² = a³
        assert_eq!(g.conj(x, a), g.inv(a)); // xax⁻¹ = a⁻¹
    }
}
