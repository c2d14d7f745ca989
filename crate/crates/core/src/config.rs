//! Line-oriented job configuration (`*.gs` files).
//!
//! ```text
//! [alphabet]
//! letters = a A b B
//! inverses = a:A b:B
//! order = a A b B
//! [rules]
//! a A ->
//! [params]
//! K = 1
//! M = 1
//! [subgroup Ha]
//! generators = a
//! membership = parabolic a A
//! [subgraph edge]
//! vertices = ; a
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::ball::{Membership, SubgroupOracle};
use crate::error::{ConfigError, RewriteError};
use crate::rewriting::{Rule, RewritingSystem};
use crate::words::{Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    /// Automaton parameter; defaults to `M²`.
    pub k: usize,
    /// Fellow-traveler constant.
    pub m: usize,
    /// Radius for bounded certification checks.
    pub r: usize,
    /// Minimum number of series coefficients compared with the oracles.
    pub n_check: usize,
    /// Word-difference bound for shortlex transversal acceptors.
    pub ft_const: usize,
    pub max_vertices: usize,
    pub max_rules: usize,
    pub max_len: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k: 1,
            m: 1,
            r: 8,
            n_check: 12,
            ft_const: 2,
            max_vertices: crate::ball::DEFAULT_MAX_VERTICES,
            max_rules: 200,
            max_len: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphSpec {
    pub name: String,
    pub words: Vec<Word>,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    /// File name or label the config was read from.
    pub source: String,
    /// Hex SHA-256 of the config text.
    pub digest: String,
    pub rewriting: RewritingSystem,
    pub params: Params,
    pub subgroups: Vec<SubgroupOracle>,
    pub subgraphs: Vec<SubgraphSpec>,
    /// Optional path-language DFA, resolved relative to the config file.
    pub language: Option<PathBuf>,
}

impl JobConfig {
    pub fn alphabet(&self) -> &Alphabet {
        self.rewriting.alphabet()
    }

    pub fn subgroup(&self, name: &str) -> Option<&SubgroupOracle> {
        self.subgroups.iter().find(|s| s.name == name)
    }

    pub fn subgraph(&self, name: &str) -> Option<&SubgraphSpec> {
        self.subgraphs.iter().find(|s| s.name == name)
    }
}

fn err(line: usize, column: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        column,
        msg: msg.into(),
    }
}

pub fn parse_config_file(path: &Path) -> Result<JobConfig, crate::Error> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = parse_config(&text, &path.display().to_string())?;
    if let Some(lang) = &cfg.language {
        if lang.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.language = Some(dir.join(lang));
            }
        }
    }
    Ok(cfg)
}

/// `(value, line, value column)`.
type Located = (String, usize, usize);
type Keys = BTreeMap<String, Located>;

#[derive(Default)]
struct Raw {
    alphabet: Keys,
    rules: Vec<(String, String, usize)>,
    params: Vec<(String, String, usize, usize)>,
    subgroups: Vec<(String, Keys, usize)>,
    subgraphs: Vec<(String, Keys, usize)>,
    language: Keys,
}

enum Section {
    None,
    Alphabet,
    Rules,
    Params,
    Subgroup,
    Subgraph,
    Language,
}

fn key_value(line: &str, lineno: usize) -> Result<(String, String, usize), ConfigError> {
    let eq = line
        .find('=')
        .ok_or_else(|| err(lineno, 1, "expected `key = value`"))?;
    let key = line[..eq].trim().to_string();
    if key.is_empty() {
        return Err(err(lineno, 1, "missing key"));
    }
    let value = &line[eq + 1..];
    let lead = value.len() - value.trim_start().len();
    Ok((key, value.trim().to_string(), eq + 2 + lead))
}

/// Parses config text. `source` labels the report and error messages.
pub fn parse_config(text: &str, source: &str) -> Result<JobConfig, ConfigError> {
    let mut raw = Raw::default();
    let mut section = Section::None;
    for (i, full) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = full.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err(lineno, 1, "unterminated section header"))?;
            let mut parts = inner.split_whitespace();
            let kind = parts.next().unwrap_or("");
            let name = parts.next();
            if parts.next().is_some() {
                return Err(err(lineno, 1, "section header takes at most one name"));
            }
            section = match (kind, name) {
                ("alphabet", None) => Section::Alphabet,
                ("rules", None) => Section::Rules,
                ("params", None) => Section::Params,
                ("language", None) => Section::Language,
                ("subgroup", Some(n)) => {
                    raw.subgroups.push((n.to_string(), BTreeMap::new(), lineno));
                    Section::Subgroup
                }
                ("subgraph", Some(n)) => {
                    raw.subgraphs.push((n.to_string(), BTreeMap::new(), lineno));
                    Section::Subgraph
                }
                ("subgroup" | "subgraph", None) => {
                    return Err(err(lineno, 2, format!("[{kind}] section needs a name")))
                }
                _ => return Err(err(lineno, 2, format!("unknown section {kind:?}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(err(lineno, 1, "content before any section")),
            Section::Rules => {
                let arrow = line
                    .find("->")
                    .ok_or_else(|| err(lineno, 1, "expected `lhs -> rhs`"))?;
                raw.rules.push((
                    line[..arrow].trim().to_string(),
                    line[arrow + 2..].trim().to_string(),
                    lineno,
                ));
            }
            Section::Params => {
                let (k, v, col) = key_value(line, lineno)?;
                raw.params.push((k, v, lineno, col));
            }
            Section::Alphabet | Section::Subgroup | Section::Subgraph | Section::Language => {
                let (k, v, col) = key_value(line, lineno)?;
                let map = match section {
                    Section::Alphabet => &mut raw.alphabet,
                    Section::Subgroup => &mut raw.subgroups.last_mut().unwrap().1,
                    Section::Subgraph => &mut raw.subgraphs.last_mut().unwrap().1,
                    _ => &mut raw.language,
                };
                if map.insert(k.clone(), (v, lineno, col)).is_some() {
                    return Err(err(lineno, 1, format!("duplicate key {k:?}")));
                }
            }
        }
    }
    build(raw, text, source)
}

fn build(raw: Raw, text: &str, source: &str) -> Result<JobConfig, ConfigError> {
    let get = |key: &str| {
        raw.alphabet
            .get(key)
            .cloned()
            .ok_or_else(|| err(1, 1, format!("[alphabet] is missing `{key}`")))
    };
    let (letters, l_line, l_col) = get("letters")?;
    let (order, o_line, o_col) = match raw.alphabet.get("order") {
        Some(o) => o.clone(),
        None => (letters.clone(), l_line, l_col),
    };
    let (inverses, i_line, i_col) = get("inverses")?;
    let order: Vec<&str> = order.split_whitespace().collect();
    let mut declared: Vec<&str> = letters.split_whitespace().collect();
    let mut sorted_order = order.clone();
    declared.sort_unstable();
    sorted_order.sort_unstable();
    if declared != sorted_order {
        return Err(err(o_line, o_col, "`order` must list exactly the declared letters"));
    }
    let mut pairs = Vec::new();
    for token in inverses.split_whitespace() {
        let (a, b) = token
            .split_once(':')
            .ok_or_else(|| err(i_line, i_col, format!("expected `x:X`, found {token:?}")))?;
        pairs.push((a, b));
    }
    let alphabet = Alphabet::new(&order, &pairs).map_err(|e| err(i_line, i_col, e.to_string()))?;

    let word = |text: &str, line: usize, col: usize| {
        alphabet
            .parse_word(text)
            .map_err(|e| err(line, col, e.to_string()))
    };
    let mut rules = Vec::new();
    for (lhs, rhs, line) in &raw.rules {
        rules.push((Rule::new(word(lhs, *line, 1)?, word(rhs, *line, 1)?), *line));
    }
    for (rule, line) in &rules {
        RewritingSystem::new(alphabet.clone(), vec![rule.clone()]).map_err(|e| match e {
            RewriteError::NonReducing { lhs, rhs } => err(
                *line,
                1,
                format!("rule {lhs} -> {rhs} is not shortlex-reducing (rhs >= lhs)"),
            ),
            other => err(*line, 1, other.to_string()),
        })?;
    }
    let rewriting = RewritingSystem::new(alphabet.clone(), rules.into_iter().map(|(r, _)| r).collect())
        .map_err(|e| err(1, 1, e.to_string()))?;

    let mut params = Params::default();
    let mut k_set = false;
    for (key, value, line, col) in &raw.params {
        let n: usize = value
            .parse()
            .map_err(|_| err(*line, *col, format!("expected a natural number, found {value:?}")))?;
        match key.as_str() {
            "K" => {
                params.k = n;
                k_set = true;
            }
            "M" => params.m = n,
            "R" => params.r = n,
            "n_check" => params.n_check = n,
            "ft_const" => params.ft_const = n,
            "max_vertices" => params.max_vertices = n,
            "max_rules" => params.max_rules = n,
            "max_len" => params.max_len = n,
            _ => return Err(err(*line, 1, format!("unknown parameter {key:?}"))),
        }
    }
    if !k_set {
        params.k = (params.m * params.m).max(1);
    }
    if params.k == 0 {
        return Err(err(1, 1, "K must be at least 1"));
    }

    let mut subgroups = Vec::new();
    for (name, map, header) in &raw.subgroups {
        let (gens, g_line, g_col) = map
            .get("generators")
            .cloned()
            .unwrap_or((String::new(), *header, 1));
        let generators = gens
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| word(t, g_line, g_col))
            .collect::<Result<Vec<_>, _>>()?;
        let (memb, m_line, m_col) = map
            .get("membership")
            .cloned()
            .ok_or_else(|| err(*header, 1, format!("subgroup {name} is missing `membership`")))?;
        let mut tokens = memb.split_whitespace();
        let membership = match tokens.next() {
            Some("parabolic") => {
                let letters = tokens
                    .map(|t| alphabet.letter(t).map_err(|e| err(m_line, m_col, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Membership::Parabolic(letters)
            }
            Some("enumerate") => {
                let t = tokens
                    .next()
                    .ok_or_else(|| err(m_line, m_col, "enumerate needs a depth"))?;
                let t = t.strip_prefix("depth=").unwrap_or(t);
                let depth: usize = t
                    .parse()
                    .map_err(|_| err(m_line, m_col, format!("bad depth {t:?}")))?;
                let required = 2 * params.r;
                if depth < required {
                    return Err(err(
                        m_line,
                        m_col,
                        format!("enumerate depth {depth} too small: depth ≥ {required} required (2R)"),
                    ));
                }
                Membership::Enumerate(depth)
            }
            _ => {
                return Err(err(
                    m_line,
                    m_col,
                    "membership must be `parabolic <letters>` or `enumerate <depth>`",
                ))
            }
        };
        let oracle = SubgroupOracle {
            name: name.clone(),
            generators,
            membership,
        };
        oracle
            .validate(&rewriting)
            .map_err(|e| err(m_line, m_col, e.to_string()))?;
        subgroups.push(oracle);
    }

    let mut subgraphs = Vec::new();
    for (name, map, header) in &raw.subgraphs {
        let (verts, v_line, v_col) = map
            .get("vertices")
            .cloned()
            .ok_or_else(|| err(*header, 1, format!("subgraph {name} is missing `vertices`")))?;
        let words = verts
            .split(';')
            .map(|t| word(t, v_line, v_col))
            .collect::<Result<Vec<_>, _>>()?;
        subgraphs.push(SubgraphSpec {
            name: name.clone(),
            words,
        });
    }

    let language = raw.language.get("dfa").map(|(p, _, _)| PathBuf::from(p));

    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(JobConfig {
        source: source.to_string(),
        digest,
        rewriting,
        params,
        subgroups,
        subgraphs,
        language,
    })
}
