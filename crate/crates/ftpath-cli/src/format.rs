//! Line-oriented text formats: fault-tolerant path instances, linkage
//! instances, the three source-problem inputs, and witness files.
//!
//! `#` starts a comment, blank lines are skipped, and parse errors carry
//! the 1-based line number of the offending input line. Serialization is
//! canonical (edges in id order, single spaces), so
//! `serialize(parse(text))` is `text` up to whitespace and comments.

use std::fmt;

use ftpath_core::dsl::DslInstance;
use ftpath_core::graph::InstanceError;
use ftpath_core::reduce::{BicliqueInput, HittingSetInput, SteinerInput};
use ftpath_core::{EdgeId, EdgeKind, FtpInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Content lines with their original 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (i + 1, line)
        })
        .filter(|(_, line)| !line.is_empty())
        .collect()
}

fn parse_token<T: std::str::FromStr>(
    line: usize,
    token: &str,
    what: &str,
) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected {what}, got `{token}`")))
}

fn expect_word(line: usize, token: Option<&str>, word: &str) -> Result<(), ParseError> {
    match token {
        Some(t) if t == word => Ok(()),
        Some(t) => Err(ParseError::new(
            line,
            format!("expected `{word}`, got `{t}`"),
        )),
        None => Err(ParseError::new(line, format!("expected `{word}`"))),
    }
}

fn parse_directedness(line: usize, token: Option<&str>) -> Result<bool, ParseError> {
    match token {
        Some("directed") => Ok(true),
        Some("undirected") => Ok(false),
        other => Err(ParseError::new(
            line,
            format!(
                "expected `directed` or `undirected`, got `{}`",
                other.unwrap_or("")
            ),
        )),
    }
}

fn instance_error(line: usize, err: InstanceError) -> ParseError {
    let message = match err {
        InstanceError::ZeroWeight { .. } => "zero weight".to_string(),
        other => other.to_string(),
    };
    ParseError::new(line, message)
}

/// Parses the instance grammar:
/// `ftp <directed|undirected> <n> <m>` / `s . t . k . l .` / `e u v w S|V`.
pub fn parse_instance(text: &str) -> Result<FtpInstance, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.iter();

    let &(ln, header) = it.next().ok_or_else(|| ParseError::new(1, "empty input"))?;
    let mut tokens = header.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "ftp")?;
    let directed = parse_directedness(ln, tokens.next())?;
    let n: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex count")?;
    let m: usize = parse_token(ln, tokens.next().unwrap_or(""), "edge count")?;
    if tokens.next().is_some() {
        return Err(ParseError::new(ln, "trailing tokens after header"));
    }

    let &(ln, terminals) = it
        .next()
        .ok_or_else(|| ParseError::new(ln, "missing terminal line"))?;
    let mut tokens = terminals.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "s")?;
    let s: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
    expect_word(ln, tokens.next(), "t")?;
    let t: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
    expect_word(ln, tokens.next(), "k")?;
    let k: u32 = parse_token(ln, tokens.next().unwrap_or(""), "integer")?;
    expect_word(ln, tokens.next(), "l")?;
    let ell: u64 = parse_token(ln, tokens.next().unwrap_or(""), "integer")?;
    if tokens.next().is_some() {
        return Err(ParseError::new(ln, "trailing tokens after terminal line"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut last_line = ln;
    for _ in 0..m {
        let &(ln, edge) = it
            .next()
            .ok_or_else(|| ParseError::new(last_line, format!("expected {m} edge lines")))?;
        last_line = ln;
        let mut tokens = edge.split_ascii_whitespace();
        expect_word(ln, tokens.next(), "e")?;
        let u: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
        let v: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
        let w: u64 = parse_token(ln, tokens.next().unwrap_or(""), "weight")?;
        let kind = match tokens.next() {
            Some("S") => EdgeKind::Safe,
            Some("V") => EdgeKind::Vulnerable,
            other => {
                return Err(ParseError::new(
                    ln,
                    format!("expected `S` or `V`, got `{}`", other.unwrap_or("")),
                ))
            }
        };
        if tokens.next().is_some() {
            return Err(ParseError::new(ln, "trailing tokens after edge"));
        }
        edges.push(((u, v, w, kind), ln));
    }
    if let Some(&(ln, _)) = it.next() {
        return Err(ParseError::new(ln, "unexpected content after edges"));
    }

    let plain: Vec<_> = edges.iter().map(|&(e, _)| e).collect();
    FtpInstance::new(directed, n, &plain, s, t, k, ell).map_err(|err| {
        let line = match err {
            InstanceError::ZeroWeight { edge }
            | InstanceError::SelfLoop { edge }
            | InstanceError::VertexOutOfRange { edge, .. } => edges[edge - 1].1,
            _ => lines[1].0,
        };
        instance_error(line, err)
    })
}

/// Canonical instance text (edges in id order).
pub fn serialize_instance(inst: &FtpInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "ftp {} {} {}\n",
        if inst.directed() {
            "directed"
        } else {
            "undirected"
        },
        inst.vertex_count(),
        inst.edge_count()
    ));
    out.push_str(&format!(
        "s {} t {} k {} l {}\n",
        inst.s(),
        inst.t(),
        inst.k(),
        inst.ell()
    ));
    for e in inst.edges() {
        out.push_str(&format!(
            "e {} {} {} {}\n",
            e.tail,
            e.head,
            e.weight,
            match e.kind {
                EdgeKind::Safe => "S",
                EdgeKind::Vulnerable => "V",
            }
        ));
    }
    out
}

/// Parses the linkage grammar: `dsl <directedness> <n> <m>` / `S v...` /
/// `T v...` / `l <int>` / `e u v w` lines.
pub fn parse_dsl(text: &str) -> Result<DslInstance, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.iter();

    let &(ln, header) = it.next().ok_or_else(|| ParseError::new(1, "empty input"))?;
    let mut tokens = header.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "dsl")?;
    let directed = parse_directedness(ln, tokens.next())?;
    let n: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex count")?;
    let m: usize = parse_token(ln, tokens.next().unwrap_or(""), "edge count")?;

    let mut terminal_list = |tag: &str| -> Result<Vec<u32>, ParseError> {
        let &(ln, line) = it
            .next()
            .ok_or_else(|| ParseError::new(ln, format!("missing `{tag}` line")))?;
        let mut tokens = line.split_ascii_whitespace();
        expect_word(ln, tokens.next(), tag)?;
        tokens.map(|tok| parse_token(ln, tok, "vertex")).collect()
    };
    let sources = terminal_list("S")?;
    let targets = terminal_list("T")?;

    let &(ln, budget_line) = it
        .next()
        .ok_or_else(|| ParseError::new(ln, "missing budget"))?;
    let mut tokens = budget_line.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "l")?;
    let budget: u64 = parse_token(ln, tokens.next().unwrap_or(""), "integer")?;

    let mut edges = Vec::with_capacity(m);
    let mut last_line = ln;
    for _ in 0..m {
        let &(ln, edge) = it
            .next()
            .ok_or_else(|| ParseError::new(last_line, format!("expected {m} edge lines")))?;
        last_line = ln;
        let mut tokens = edge.split_ascii_whitespace();
        expect_word(ln, tokens.next(), "e")?;
        let u: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
        let v: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
        let w: u64 = parse_token(ln, tokens.next().unwrap_or(""), "weight")?;
        edges.push((u, v, w));
    }
    DslInstance::new(directed, n, &edges, sources, targets, budget)
        .map_err(|err| ParseError::new(lines[0].0, err.to_string()))
}

pub fn serialize_dsl(inst: &DslInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "dsl {} {} {}\n",
        if inst.directed() {
            "directed"
        } else {
            "undirected"
        },
        inst.vertex_count(),
        inst.edges().len()
    ));
    let list = |vs: &[u32]| {
        vs.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("S {}\n", list(inst.sources())));
    out.push_str(&format!("T {}\n", list(inst.targets())));
    out.push_str(&format!("l {}\n", inst.budget()));
    for e in inst.edges() {
        out.push_str(&format!("e {} {} {}\n", e.tail, e.head, e.weight));
    }
    out
}

/// `bip <|A|> <|B|> <|E|> <d>` followed by `e <a> <b>` lines.
pub fn parse_biclique(text: &str) -> Result<BicliqueInput, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    let &(ln, header) = it.next().ok_or_else(|| ParseError::new(1, "empty input"))?;
    let mut tokens = header.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "bip")?;
    let left: u32 = parse_token(ln, tokens.next().unwrap_or(""), "left size")?;
    let right: u32 = parse_token(ln, tokens.next().unwrap_or(""), "right size")?;
    let m: usize = parse_token(ln, tokens.next().unwrap_or(""), "edge count")?;
    let d: u32 = parse_token(ln, tokens.next().unwrap_or(""), "order")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let &(ln, line) = it
            .next()
            .ok_or_else(|| ParseError::new(ln, format!("expected {m} edge lines")))?;
        let mut tokens = line.split_ascii_whitespace();
        expect_word(ln, tokens.next(), "e")?;
        let a: u32 = parse_token(ln, tokens.next().unwrap_or(""), "left vertex")?;
        let b: u32 = parse_token(ln, tokens.next().unwrap_or(""), "right vertex")?;
        edges.push((a, b));
    }
    Ok(BicliqueInput {
        left,
        right,
        edges,
        d,
    })
}

/// `st <n> <m> <d>`, a `T <list>` line, then `e <u> <v>` lines.
pub fn parse_steiner(text: &str) -> Result<SteinerInput, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    let &(ln, header) = it.next().ok_or_else(|| ParseError::new(1, "empty input"))?;
    let mut tokens = header.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "st")?;
    let n: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex count")?;
    let m: usize = parse_token(ln, tokens.next().unwrap_or(""), "edge count")?;
    let d: u32 = parse_token(ln, tokens.next().unwrap_or(""), "bound")?;
    let &(ln, terminal_line) = it
        .next()
        .ok_or_else(|| ParseError::new(ln, "missing terminal line"))?;
    let mut tokens = terminal_line.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "T")?;
    let terminals: Vec<u32> = tokens
        .map(|tok| parse_token(ln, tok, "terminal"))
        .collect::<Result<_, _>>()?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let &(ln, line) = it
            .next()
            .ok_or_else(|| ParseError::new(ln, format!("expected {m} edge lines")))?;
        let mut tokens = line.split_ascii_whitespace();
        expect_word(ln, tokens.next(), "e")?;
        let u: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
        let v: u32 = parse_token(ln, tokens.next().unwrap_or(""), "vertex")?;
        edges.push((u, v));
    }
    Ok(SteinerInput {
        n,
        edges,
        terminals,
        d,
    })
}

/// `hs <|U|> <|F|> <d>` followed by one `f <elem>...` line per set.
pub fn parse_hitting_set(text: &str) -> Result<HittingSetInput, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    let &(ln, header) = it.next().ok_or_else(|| ParseError::new(1, "empty input"))?;
    let mut tokens = header.split_ascii_whitespace();
    expect_word(ln, tokens.next(), "hs")?;
    let universe: u32 = parse_token(ln, tokens.next().unwrap_or(""), "universe size")?;
    let family: usize = parse_token(ln, tokens.next().unwrap_or(""), "family size")?;
    let d: u32 = parse_token(ln, tokens.next().unwrap_or(""), "bound")?;
    let mut sets = Vec::with_capacity(family);
    for _ in 0..family {
        let &(ln, line) = it
            .next()
            .ok_or_else(|| ParseError::new(ln, format!("expected {family} set lines")))?;
        let mut tokens = line.split_ascii_whitespace();
        expect_word(ln, tokens.next(), "f")?;
        let set: Vec<u32> = tokens
            .map(|tok| parse_token(ln, tok, "element"))
            .collect::<Result<_, _>>()?;
        sets.push(set);
    }
    Ok(HittingSetInput { universe, sets, d })
}

/// Witness files hold whitespace-separated edge ids.
pub fn parse_witness(text: &str) -> Result<Vec<EdgeId>, ParseError> {
    let mut ids = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_ascii_whitespace() {
            let id: u32 = parse_token(i + 1, token, "edge id")?;
            if id == 0 {
                return Err(ParseError::new(i + 1, "edge ids are 1-based"));
            }
            ids.push(EdgeId(id));
        }
    }
    Ok(ids)
}

pub fn serialize_witness(ids: &[EdgeId]) -> String {
    let mut sorted: Vec<u32> = ids.iter().map(|id| id.0).collect();
    sorted.sort_unstable();
    sorted
        .iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(" ")
        + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_minimal_instance() {
        let text = "ftp directed 2 1\ns 1 t 2 k 0 l 3\ne 1 2 3 S\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.directed());
        assert_eq!(inst.edge_count(), 1);
        assert_eq!(inst.edges()[0].weight, 3);
        assert_eq!(serialize_instance(&inst), text);
    }

    #[test]
    fn rejects_zero_weight_with_line_number() {
        let text = "ftp directed 2 1\ns 1 t 2 k 0 l 3\ne 1 2 0 S\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("zero weight"), "{}", err.message);
    }

    #[test]
    fn rejects_malformed_header_and_bad_vertices() {
        let err = parse_instance("ftp sideways 2 1\ns 1 t 2 k 0 l 3\ne 1 2 1 S\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_instance("ftp directed 2 1\ns 1 t 2 k 0 l 3\ne 1 3 1 S\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("out of range"));
        let err = parse_instance("ftp directed 2 1\ns 1 t 2 k 0 l 3\ne 2 2 1 S\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("self-loop"));
    }

    #[test]
    fn comments_and_blanks_are_ignored_and_line_numbers_survive() {
        let text = "# instance\n\nftp undirected 3 2\n  s 1 t 3 k 1 l 4 # terminals\n\ne 1 2 1 V\ne 2 3 0 S\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("zero weight"));
    }

    #[test]
    fn round_trips_generated_instances() {
        use ftpath_core::reduce::{gen_random, EllPolicy, GenParams};
        for seed in 0..50 {
            let inst = gen_random(&GenParams {
                directed: seed % 2 == 0,
                n: 7,
                m: 12,
                safe_fraction: 0.5,
                weight_range: (1, 4),
                k: 2,
                ell: EllPolicy::Fixed(9),
                seed,
            })
            .unwrap();
            let text = serialize_instance(&inst);
            let reparsed = parse_instance(&text).unwrap();
            assert_eq!(inst, reparsed);
            assert_eq!(serialize_instance(&reparsed), text);
        }
    }

    #[test]
    fn round_trips_a_generated_biclique_instance() {
        use ftpath_core::reduce::{from_biclique, BicliqueInput};
        let mut edges = Vec::new();
        for a in 1..=4 {
            for b in 1..=4 {
                edges.push((a, b));
            }
        }
        let inst = from_biclique(&BicliqueInput {
            left: 4,
            right: 4,
            edges,
            d: 2,
        })
        .unwrap();
        let reparsed = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(inst, reparsed);
    }

    #[test]
    fn parses_dsl_and_round_trips() {
        let text = "dsl directed 3 2\nS 1 1\nT 3 3\nl 9\ne 1 2 0\ne 2 3 4\n";
        let inst = parse_dsl(text).unwrap();
        assert_eq!(inst.sources(), &[1, 1]);
        assert_eq!(inst.edges()[0].weight, 0);
        assert_eq!(serialize_dsl(&inst), text);
        let err = parse_dsl("dsl directed 3 2\nS 1\nT 3 3\nl 9\ne 1 2 0\ne 2 3 4\n").unwrap_err();
        assert!(err.message.contains("|S| = 1 but |T| = 2"));
    }

    #[test]
    fn parses_source_problem_files() {
        let bip = parse_biclique("bip 2 2 3 1\ne 1 1\ne 1 2\ne 2 1\n").unwrap();
        assert_eq!(bip.edges.len(), 3);
        let st = parse_steiner("st 3 2 1\nT 1 3\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(st.terminals, vec![1, 3]);
        let hs = parse_hitting_set("hs 2 2 1\nf 1\nf 1 2\n").unwrap();
        assert_eq!(hs.sets, vec![vec![1], vec![1, 2]]);
    }

    #[test]
    fn witness_files_round_trip_sorted() {
        let ids = parse_witness("3 1\n2\n").unwrap();
        assert_eq!(serialize_witness(&ids), "1 2 3\n");
    }
}
