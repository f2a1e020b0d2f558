//! Line-oriented text formats. Points, vertices and element indices are
//! 1-based; `#` starts a comment; blank lines are ignored.
//!
//! * `.grp`: `degree d`, then one generator per line, in cycle notation or
//!   as `images: i1 ... id`.
//! * `.pres`: `gens n`, then one relator per line as a word such as
//!   `a1 a6 a1 a6 a3'`.
//! * `.ccs`: `degree d`, `n k`, `k` generator lines, then `phi` lines
//!   `x -> y` in canonical element indices.
//! * `.wri`: `w <path to .grp>`, `a <generator>`, `h <generator>` (repeated),
//!   `m <copies>`.
//! * `.gph`: `vertices n`, then one `u v` edge per line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::concentric::{check_concentric, ConcentricError, ConcentricSequence};
use crate::graph::{Graph, GraphError};
use crate::perm::{PermError, Permutation};
use crate::presentation::{FinitePresentation, PresentationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("line {line}: {source}")]
    Perm { line: usize, source: PermError },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Concentric(#[from] ConcentricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("phi entry for element {element} disagrees with the computed map")]
    PhiMismatch { element: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Content lines with their 1-based line numbers, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn header(line: Option<(usize, &str)>, key: &'static str) -> Result<(usize, usize), FormatError> {
    let (no, l) = line.ok_or(FormatError::MissingHeader(key))?;
    let rest = l.strip_prefix(key).ok_or(FormatError::MissingHeader(key))?;
    let value = rest.trim().parse().map_err(|_| syntax(no, format!("bad `{key}` value")))?;
    Ok((no, value))
}

/// Parses one generator in cycle notation or `images:` form.
pub fn parse_generator(text: &str, degree: usize) -> Result<Permutation, PermError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("images:") {
        let images: Vec<usize> = rest
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| PermError::NotBijective(format!("bad image {t:?}"))))
            .collect::<Result<_, _>>()?;
        if images.len() != degree {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: images.len(),
            });
        }
        return Permutation::from_one_based(&images);
    }
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| PermError::NotBijective(format!("expected `(` in {text:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| PermError::NotBijective(format!("unclosed cycle in {text:?}")))?;
        let points: Vec<usize> = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| PermError::NotBijective(format!("bad point {t:?}"))))
            .collect::<Result<_, _>>()?;
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = body[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

pub fn parse_group(text: &str) -> Result<GroupFile, FormatError> {
    let mut it = lines(text);
    let (_, degree) = header(it.next(), "degree")?;
    let generators = it
        .map(|(no, l)| parse_generator(l, degree).map_err(|source| FormatError::Perm { line: no, source }))
        .collect::<Result<_, _>>()?;
    Ok(GroupFile { degree, generators })
}

pub fn write_group(degree: usize, generators: &[Permutation]) -> String {
    let mut out = format!("degree {degree}\n");
    for g in generators {
        writeln!(out, "{g}").expect("string write");
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<FinitePresentation, FormatError> {
    let mut it = lines(text);
    let (_, count) = header(it.next(), "gens")?;
    let mut relators = Vec::new();
    for (no, l) in it {
        let word = l
            .split_whitespace()
            .map(|t| {
                let (body, inverse) = match t.strip_suffix('\'') {
                    Some(b) => (b, true),
                    None => (t, false),
                };
                let i: i32 = body
                    .strip_prefix('a')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| syntax(no, format!("bad letter {t:?}")))?;
                Ok(if inverse { -i } else { i })
            })
            .collect::<Result<Vec<i32>, FormatError>>()?;
        relators.push(word);
    }
    Ok(FinitePresentation::new(count, relators)?)
}

pub fn write_presentation(p: &FinitePresentation) -> String {
    let mut out = format!("gens {}\n", p.generator_count());
    for r in p.relators() {
        let word: Vec<String> = r
            .iter()
            .map(|&x| if x > 0 { format!("a{x}") } else { format!("a{}'", -x) })
            .collect();
        writeln!(out, "{}", word.join(" ")).expect("string write");
    }
    out
}

/// Parses a witness, recomputes the sequence, and checks every stated
/// `phi` entry against it.
pub fn parse_concentric(text: &str) -> Result<ConcentricSequence, FormatError> {
    let mut it = lines(text);
    let (_, degree) = header(it.next(), "degree")?;
    let (_, n) = header(it.next(), "n")?;
    let mut gens = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, l) = it.next().ok_or_else(|| syntax(0, format!("expected {n} generators")))?;
        gens.push(parse_generator(l, degree).map_err(|source| FormatError::Perm { line: no, source })?);
    }
    let seq = check_concentric(&gens)?;
    let h = seq.h_set();
    let mut stated = 0;
    for (no, l) in it {
        let (x, y) = l.split_once("->").ok_or_else(|| syntax(no, "expected `x -> y`"))?;
        let parse = |t: &str| -> Result<usize, FormatError> {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1 && v <= h.len())
                .ok_or_else(|| syntax(no, format!("bad element index {t:?}")))
        };
        let (x, y) = (parse(x)?, parse(y)?);
        match seq.phi(h.get(x - 1)) {
            Some(img) if h.index_of(img) == Some(y - 1) => stated += 1,
            _ => return Err(FormatError::PhiMismatch { element: x }),
        }
    }
    if stated != seq.b_set().len() {
        return Err(syntax(0, format!("{stated} phi lines, expected {}", seq.b_set().len())));
    }
    Ok(seq)
}

pub fn write_concentric(seq: &ConcentricSequence) -> String {
    let mut out = format!("degree {}\nn {}\n", seq.degree(), seq.n());
    for g in seq.gens() {
        writeln!(out, "{g}").expect("string write");
    }
    let h = seq.h_set();
    let mut pairs: Vec<(usize, usize)> = seq
        .b_set()
        .iter()
        .map(|b| {
            let img = seq.phi(b).expect("b lies in B");
            (h.index_of(b).expect("B within H") + 1, h.index_of(img).expect("C within H") + 1)
        })
        .collect();
    pairs.sort_unstable();
    for (x, y) in pairs {
        writeln!(out, "{x} -> {y}").expect("string write");
    }
    out
}

/// A wreath instance description; generator lines stay textual until the
/// degree of `W` is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathFile {
    pub w: String,
    pub a: String,
    pub h: Vec<String>,
    pub m: usize,
}

impl WreathFile {
    /// `a` and the `h` generators at the given degree.
    pub fn generators(&self, degree: usize) -> Result<(Permutation, Vec<Permutation>), PermError> {
        let a = parse_generator(&self.a, degree)?;
        let h = self.h.iter().map(|t| parse_generator(t, degree)).collect::<Result<_, _>>()?;
        Ok((a, h))
    }
}

pub fn parse_wreath(text: &str) -> Result<WreathFile, FormatError> {
    let (mut w, mut a, mut h, mut m) = (None, None, Vec::new(), None);
    for (no, l) in lines(text) {
        let (key, value) = l.split_once(char::is_whitespace).ok_or_else(|| syntax(no, "expected `key value`"))?;
        let value = value.trim().to_string();
        match key {
            "w" => w = Some(value),
            "a" => a = Some(value),
            "h" => h.push(value),
            "m" => m = Some(value.parse().map_err(|_| syntax(no, "bad `m` value"))?),
            _ => return Err(syntax(no, format!("unknown key {key:?}"))),
        }
    }
    Ok(WreathFile {
        w: w.ok_or(FormatError::MissingHeader("w"))?,
        a: a.ok_or(FormatError::MissingHeader("a"))?,
        h,
        m: m.ok_or(FormatError::MissingHeader("m"))?,
    })
}

pub fn write_wreath(f: &WreathFile) -> String {
    let mut out = format!("w {}\na {}\n", f.w, f.a);
    for h in &f.h {
        writeln!(out, "h {h}").expect("string write");
    }
    writeln!(out, "m {}", f.m).expect("string write");
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut it = lines(text);
    let (_, n) = header(it.next(), "vertices")?;
    let mut edges = Vec::new();
    for (no, l) in it {
        let ends: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| syntax(no, format!("bad vertex {t:?}"))))
            .collect::<Result<_, _>>()?;
        match ends[..] {
            [u, v] if u >= 1 && v >= 1 => edges.push((u - 1, v - 1)),
            _ => return Err(syntax(no, "expected two 1-based vertices")),
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concentric::d8_fixture;
    use crate::presentation::h7_presentation;

    #[test]
    fn group_forms() {
        let f = parse_group("# S3\ndegree 3\n(1 2 3)\nimages: 2 1 3\n()\n").unwrap();
        assert_eq!(f.degree, 3);
        assert_eq!(f.generators[1], Permutation::from_cycles(3, &[vec![1, 2]]).unwrap());
        assert!(f.generators[2].is_identity());
        assert_eq!(write_group(f.degree, &f.generators), "degree 3\n(1 2 3)\n(1 2)\n()\n");
        assert!(matches!(parse_group("degree 3\n(1 4)\n"), Err(FormatError::Perm { line: 2, .. })));
        assert!(matches!(parse_group("(1 2)\n"), Err(FormatError::MissingHeader("degree"))));
    }

    #[test]
    fn h7_round_trip() {
        let p = h7_presentation();
        let text = write_presentation(&p);
        assert!(text.contains("a1 a6 a1 a6 a3'"));
        assert_eq!(parse_presentation(&text).unwrap(), p);
    }

    #[test]
    fn d8_witness_round_trip() {
        let seq = check_concentric(&d8_fixture()).unwrap();
        let text = write_concentric(&seq);
        let back = parse_concentric(&text).unwrap();
        assert_eq!(write_concentric(&back), text);
        let last = text.lines().last().unwrap();
        let (x, y) = last.split_once(" -> ").unwrap();
        let tampered = text.replace(last, &format!("{x} -> {}", if y == "1" { 2 } else { 1 }));
        assert!(matches!(parse_concentric(&tampered), Err(FormatError::PhiMismatch { .. })));
    }

    #[test]
    fn wreath_and_graph_files() {
        let f = parse_wreath("w a8.grp\na (1 2 3)\nh (1 2)(3 4)\nh (1 3)(2 4)\nm 2\n").unwrap();
        assert_eq!(f.h.len(), 2);
        assert_eq!(parse_wreath(&write_wreath(&f)).unwrap(), f);
        let (a, h) = f.generators(4).unwrap();
        assert_eq!(a.order(), 3u32.into());
        assert_eq!(h.len(), 2);
        let g = parse_graph("vertices 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(g, Graph::cycle(4));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert!(parse_graph("vertices 2\n1 1\n").is_err());
    }
}
