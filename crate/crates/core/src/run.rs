//! Subcommand orchestration and reports.
//!
//! A report is plain text: a header naming the command and the config
//! digest, one line per verdict, series and diagnostic in the order they
//! were produced, a status line, and finally a `[timings]` block. Only the
//! timings vary between runs on the same input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_traits::Signed;

use crate::automaton::dfa::{cone_type_quotient, intersect_language, irreducible_dfa, Dfa};
use crate::automaton::transversal::shortlex_transversal_acceptor;
use crate::automaton::{add_coset_accept_set, build_automaton, FftpAutomaton, GEODESICS};
use crate::ball::{load_subgraph, Ball, SubgroupOracle};
use crate::bundled;
use crate::config::JobConfig;
use crate::error::{Error, Result};
use crate::fellow::{check_fftp, check_projections, replay_fftp, FftpReport, ProjectionMode, ProjectionReport};
use crate::growth::{
    common_denominator, coset_series, coset_weights, embedding_series, geodesic_series, growth_rate, required_radius,
    spectral_rate, validate_combing, vertex_series, Check, SeriesPair,
};
use crate::oracle::{brute_force_counts, CountKind};
use crate::rewriting::{Completion, ConfluenceReport, RewritingSystem};
use crate::scalar::{as_integer, Scalar};
use crate::{Matrices, Rational, Series};

/// Largest disagreement tolerated between the exact rate and the
/// power-iteration estimate.
pub const RATE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthKind {
    Sphere,
    Ball,
    Geodesic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    CheckConfluence,
    Complete,
    CheckFftp,
    CheckProjections(String),
    BuildAutomaton,
    Growth(GrowthKind),
    CosetGrowth(String),
    EmbedGrowth(String),
    ShortlexTransversal(String),
    Rate,
    ExportDfa(String),
    Selftest,
}

impl Command {
    pub fn label(&self) -> String {
        match self {
            Command::CheckConfluence => "check-confluence".into(),
            Command::Complete => "complete".into(),
            Command::CheckFftp => "check-fftp".into(),
            Command::CheckProjections(h) => format!("check-projections {h}"),
            Command::BuildAutomaton => "build-automaton".into(),
            Command::Growth(GrowthKind::Sphere) => "growth --sphere".into(),
            Command::Growth(GrowthKind::Ball) => "growth --ball".into(),
            Command::Growth(GrowthKind::Geodesic) => "growth --geodesic".into(),
            Command::CosetGrowth(h) => format!("coset-growth {h}"),
            Command::EmbedGrowth(z) => format!("embed-growth {z}"),
            Command::ShortlexTransversal(h) => format!("shortlex-transversal {h}"),
            Command::Rate => "rate".into(),
            Command::ExportDfa(w) => format!("export-dfa {w}"),
            Command::Selftest => "selftest".into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Skip the brute-force oracle comparisons.
    pub unchecked: bool,
    /// Directory for ball caches, keyed by config digest and radius.
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub lines: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub series: Vec<(String, Series)>,
    /// Text of the DFA produced by `export-dfa`.
    pub dfa: Option<String>,
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome != Outcome::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.outcome == Outcome::Fail)
    }

    /// First recorded series with this label.
    pub fn series(&self, label: &str) -> Option<&Series> {
        self.series.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    fn verdict(&mut self, name: &str, outcome: Outcome, detail: &str) {
        let line = if detail.is_empty() {
            format!("{} {name}", outcome.tag())
        } else {
            format!("{} {name}: {detail}", outcome.tag())
        };
        self.lines.push(line);
        self.verdicts.push(Verdict {
            name: name.to_string(),
            outcome,
        });
    }

    fn check(&mut self, name: &str, ok: bool, detail: &str) -> bool {
        self.verdict(name, Outcome::from_bool(ok), detail);
        ok
    }

    fn info(&mut self, line: String) {
        self.lines.push(line);
    }

    fn add_series(&mut self, label: &str, s: &Series) {
        self.lines.push(format!("series {label}: {s}"));
        self.series.push((label.to_string(), s.clone()));
    }

    fn timed<R>(&mut self, label: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let out = f();
        self.timings.push((label.to_string(), t.elapsed()));
        out
    }

    /// Everything except the `[timings]` block.
    pub fn render_body(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for i in &self.inputs {
            let _ = writeln!(s, "input: {i}");
        }
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        let failed = self.failures().count();
        let _ = writeln!(
            s,
            "status: {} (checks {}, failed {})",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.verdicts.len(),
            failed
        );
        s
    }

    pub fn render(&self, timings: bool) -> String {
        let mut s = self.render_body();
        if timings {
            s.push_str("[timings]\n");
            for (label, d) in &self.timings {
                let _ = writeln!(s, "{label}: {:.3}s", d.as_secs_f64());
            }
        }
        s
    }
}

/// Ball, automaton and matrices shared by the subcommands of one run.
struct Session<'a> {
    cfg: &'a JobConfig,
    opts: &'a RunOptions,
    ball: Option<Ball>,
    aut: Option<FftpAutomaton>,
    mats: Option<Matrices>,
    combed: bool,
    /// Verified series by label, so repeated queries skip the oracles.
    pairs: BTreeMap<String, (SeriesPair<Rational>, bool)>,
}

impl<'a> Session<'a> {
    fn new(cfg: &'a JobConfig, opts: &'a RunOptions) -> Self {
        Session {
            cfg,
            opts,
            ball: None,
            aut: None,
            mats: None,
            combed: false,
            pairs: BTreeMap::new(),
        }
    }

    fn ball(&self) -> &Ball {
        self.ball.as_ref().expect("ball built")
    }

    fn aut(&self) -> &FftpAutomaton {
        self.aut.as_ref().expect("automaton built")
    }

    fn mats(&self) -> &Matrices {
        self.mats.as_ref().expect("matrices built")
    }

    fn subgroup(&self, name: &str) -> Result<&'a SubgroupOracle> {
        self.cfg
            .subgroup(name)
            .ok_or_else(|| Error::Input(format!("no subgroup named {name:?} in {}", self.cfg.source)))
    }

    fn cache_path(&self, radius: usize) -> Option<PathBuf> {
        self.opts
            .cache_dir
            .as_ref()
            .map(|d| d.join(format!("{}-r{radius}.ball", &self.cfg.digest[..16])))
    }

    /// Grows the ball to at least `radius`. Vertex ids of a smaller ball
    /// stay valid: breadth-first numbering does not depend on the radius.
    fn ensure_ball(&mut self, rep: &mut RunReport, radius: usize) -> Result<()> {
        if self.ball.as_ref().is_some_and(|b| b.radius() >= radius) {
            return Ok(());
        }
        let rs: &RewritingSystem = &self.cfg.rewriting;
        if let Some(path) = self.cache_path(radius).filter(|p| p.exists()) {
            let file = fs::File::open(&path)?;
            let ball = rep.timed(&format!("ball cache r={radius}"), || {
                Ball::read_cache(rs, BufReader::new(file))
            })?;
            self.ball = Some(ball);
            return Ok(());
        }
        let limit = self.cfg.params.max_vertices;
        let ball = rep.timed(&format!("ball r={radius}"), || Ball::build_with_limit(rs, radius, limit))?;
        if let Some(path) = self.cache_path(radius) {
            fs::create_dir_all(path.parent().expect("cache file has a directory"))?;
            ball.write_cache(BufWriter::new(fs::File::create(&path)?))?;
        }
        self.ball = Some(ball);
        Ok(())
    }

    fn ensure_automaton(&mut self, rep: &mut RunReport) -> Result<()> {
        if self.aut.is_some() {
            return Ok(());
        }
        let p = &self.cfg.params;
        self.ensure_ball(rep, (2 * p.k + 2).max(p.r))?;
        let ball = self.ball();
        let aut = rep.timed("automaton", || build_automaton(ball, p.k))?;
        let mats = Matrices::new(&aut)?;
        rep.info(format!(
            "automaton: K={} states={} non-fail={} semantics validated on words of length <= {}",
            p.k,
            aut.len(),
            mats.len(),
            aut.validated_to
        ));
        self.aut = Some(aut);
        self.mats = Some(mats);
        Ok(())
    }

    /// Automaton plus an exact combing check on the `R`-ball.
    fn ensure_combing(&mut self, rep: &mut RunReport) -> Result<()> {
        self.ensure_automaton(rep)?;
        if self.combed {
            return Ok(());
        }
        let r = self.cfg.params.r;
        let (aut, ball) = (self.aut(), self.ball());
        let c = rep.timed("combing", || validate_combing::<Rational>(aut, ball, r))?;
        let detail = match &c.worst {
            None => format!("{} vertices within radius {r} have total weight 1", c.vertices),
            Some((v, w)) => format!("vertex {:?} has total weight {w}", ball.format(*v)),
        };
        rep.check("combing", c.pass, &detail);
        self.combed = true;
        Ok(())
    }

    /// The oracle ball, unless running unchecked.
    fn ensure_check(&mut self, rep: &mut RunReport) -> Result<bool> {
        if self.opts.unchecked {
            return Ok(false);
        }
        let radius = required_radius(self.mats(), self.cfg.params.n_check);
        self.ensure_ball(rep, radius)?;
        Ok(true)
    }

    fn check_arg(&self, checked: bool) -> Option<Check<'_>> {
        checked.then(|| Check { ball: self.ball() })
    }
}

fn prefix_verdict(rep: &mut RunReport, name: &str, checked: bool, s: &Series) {
    if checked {
        rep.check(name, true, &format!("{} coefficients match the oracle", s.prefix().len()));
    } else {
        rep.verdict(name, Outcome::Skip, "oracle comparison disabled");
    }
}

/// Checks `(1 − t)·ball = sphere` and records both series.
fn record_pair(rep: &mut RunReport, label: &str, pair: &SeriesPair<Rational>, sphere: bool, ball: bool) {
    if sphere {
        rep.add_series(&format!("{label}sphere"), &pair.sphere);
    }
    if ball {
        rep.add_series(&format!("{label}ball"), &pair.ball);
    }
    rep.check(
        &format!("{label}ball = {label}sphere/(1-t)"),
        pair.ball.times_one_minus_t().same_function(&pair.sphere),
        "",
    );
}

fn integrality(rep: &mut RunReport, name: &str, s: &Series, n: usize) {
    let bad = s
        .expand(n)
        .into_iter()
        .enumerate()
        .find(|(_, c)| as_integer(c).is_none() || c.is_negative());
    match bad {
        None => rep.check(name, true, &format!("first {n} coefficients are non-negative integers")),
        Some((i, c)) => rep.check(name, false, &format!("coefficient {i} is {c}")),
    };
}

fn cmd_confluence(s: &mut Session, rep: &mut RunReport) {
    let a = s.cfg.alphabet();
    match s.cfg.rewriting.check_confluence() {
        ConfluenceReport::Confluent { overlaps_checked } => {
            rep.check("confluence", true, &format!("{overlaps_checked} overlaps resolve"));
        }
        ConfluenceReport::NotConfluent { word, left, right } => {
            let detail = format!(
                "{:?} has normal forms {:?} and {:?}",
                a.format_word(&word),
                a.format_word(&left),
                a.format_word(&right)
            );
            rep.check("confluence", false, &detail);
        }
    }
}

fn format_rules(rep: &mut RunReport, rs: &RewritingSystem) {
    let a = rs.alphabet();
    for r in rs.rules() {
        let side = |w: &crate::words::Word| w.letters().iter().map(|&x| a.name(x)).collect::<Vec<_>>().join(" ");
        rep.info(format!("rule: {} -> {}", side(&r.lhs), side(&r.rhs)).trim_end().to_string());
    }
}

fn cmd_complete(s: &mut Session, rep: &mut RunReport) {
    let p = &s.cfg.params;
    match rep.timed("completion", || s.cfg.rewriting.complete(p.max_rules, p.max_len)) {
        Completion::Complete(rs) => {
            rep.check("completion", true, &format!("{} rules, confluent", rs.rules().len()));
            format_rules(rep, &rs);
        }
        Completion::Incomplete { partial, reason } => {
            rep.check("completion", false, &reason);
            format_rules(rep, &partial);
        }
    }
}

fn cmd_fftp(s: &mut Session, rep: &mut RunReport) -> Result<()> {
    let p = &s.cfg.params;
    s.ensure_ball(rep, p.r + p.m + 1)?;
    let ball = s.ball();
    let r: FftpReport = rep.timed("fftp", || check_fftp(ball, p.m, p.r))?;
    let name = format!("fftp M={} R={}", p.m, p.r);
    match &r.counterexample {
        None => {
            rep.check(
                &name,
                r.pass,
                &format!(
                    "{} geodesics, {} non-geodesic one-edge continuations",
                    r.geodesics, r.paths_checked
                ),
            );
        }
        Some(c) => {
            let w = ball.alphabet().format_word(&c.word);
            rep.check(
                &name,
                false,
                &format!(
                    "counterexample {w:?}: shortest {}-fellow traveler has length {}",
                    p.m, c.best_length
                ),
            );
            let replayed = replay_fftp(ball, p.m, &c.word)?;
            rep.info(format!(
                "replay {w:?}: {}",
                if replayed { "confirmed" } else { "not reproduced" }
            ));
        }
    }
    rep.info(format!("note: {}", FftpReport::NOTE));
    Ok(())
}

fn projection_line(rep: &mut RunReport, ball: &Ball, r: &ProjectionReport) -> bool {
    let name = format!("{} projections {} M={} R={}", r.mode.name(), r.subgroup, r.m, r.r);
    let detail = match &r.counterexample {
        None => format!("{} edges checked", r.edges_checked),
        Some(f) => format!(
            "edge {:?} - {:?} has value {}",
            ball.alphabet().format_word(&f.u),
            ball.alphabet().format_word(&f.v),
            f.value
        ),
    };
    rep.check(&name, r.pass, &detail)
}

fn cmd_projections(s: &mut Session, rep: &mut RunReport, h: &str) -> Result<()> {
    let p = &s.cfg.params;
    let sub = s.subgroup(h)?;
    s.ensure_ball(rep, 2 * p.r)?;
    let ball = s.ball();
    let bounded = rep.timed("projections bounded", || {
        check_projections(ball, sub, p.m, p.r, ProjectionMode::Bounded)
    })?;
    let fellow = rep.timed("projections fellow", || {
        check_projections(ball, sub, p.m, p.r, ProjectionMode::Fellow)
    })?;
    let b = projection_line(rep, ball, &bounded);
    let f = projection_line(rep, ball, &fellow);
    rep.check("bounded implies fellow", !b || f, "");
    Ok(())
}

fn cmd_automaton(s: &mut Session, rep: &mut RunReport) -> Result<()> {
    s.ensure_combing(rep)?;
    let aut = s.aut();
    let cones = cone_type_quotient(aut);
    rep.info(format!("cone types: {}", cones.count));
    rep.check(
        "semantics",
        true,
        &format!("validated on all words of length <= {}", aut.validated_to),
    );
    Ok(())
}

fn vertex_pair(s: &mut Session, rep: &mut RunReport) -> Result<(SeriesPair<Rational>, bool)> {
    if let Some(hit) = s.pairs.get("vertex") {
        return Ok(hit.clone());
    }
    s.ensure_combing(rep)?;
    let checked = s.ensure_check(rep)?;
    let n_check = s.cfg.params.n_check;
    let pair = rep.timed("vertex series", || vertex_series(s.mats(), s.check_arg(checked), n_check))?;
    s.pairs.insert("vertex".into(), (pair.clone(), checked));
    Ok((pair, checked))
}

fn geodesic_pair(s: &mut Session, rep: &mut RunReport) -> Result<(SeriesPair<Rational>, bool)> {
    if let Some(hit) = s.pairs.get("geodesic") {
        return Ok(hit.clone());
    }
    s.ensure_automaton(rep)?;
    let checked = s.ensure_check(rep)?;
    let n_check = s.cfg.params.n_check;
    let pair = rep.timed("geodesic series", || geodesic_series(s.mats(), s.check_arg(checked), n_check))?;
    s.pairs.insert("geodesic".into(), (pair.clone(), checked));
    Ok((pair, checked))
}

fn cmd_growth(s: &mut Session, rep: &mut RunReport, kind: GrowthKind) -> Result<()> {
    match kind {
        GrowthKind::Sphere | GrowthKind::Ball => {
            let (pair, checked) = vertex_pair(s, rep)?;
            prefix_verdict(rep, "vertex prefix", checked, &pair.sphere);
            record_pair(rep, "", &pair, kind == GrowthKind::Sphere, kind == GrowthKind::Ball);
        }
        GrowthKind::Geodesic => {
            let (pair, checked) = geodesic_pair(s, rep)?;
            prefix_verdict(rep, "geodesic prefix", checked, &pair.sphere);
            rep.add_series("geodesic", &pair.sphere);
            rep.add_series("geodesic-cumulative", &pair.ball);
        }
    }
    Ok(())
}

fn coset_pair(s: &mut Session, rep: &mut RunReport, h: &str) -> Result<(SeriesPair<Rational>, bool)> {
    let key = format!("coset({h})");
    if let Some(hit) = s.pairs.get(&key) {
        return Ok(hit.clone());
    }
    let sub = s.subgroup(h)?;
    s.ensure_combing(rep)?;
    let checked = s.ensure_check(rep)?;
    let n_check = s.cfg.params.n_check;
    let pair = rep.timed(&format!("{key} series"), || {
        coset_series(s.aut(), s.mats(), s.ball(), sub, s.check_arg(checked), n_check)
    })?;
    s.pairs.insert(key, (pair.clone(), checked));
    Ok((pair, checked))
}

fn cmd_coset(s: &mut Session, rep: &mut RunReport, h: &str) -> Result<()> {
    let sub = s.subgroup(h)?;
    let (pair, checked) = coset_pair(s, rep, h)?;
    let label = format!("coset({h}) ");
    prefix_verdict(rep, &format!("{label}prefix"), checked, &pair.sphere);
    let n = s.cfg.params.n_check.max(pair.sphere.prefix().len());
    integrality(rep, &format!("{label}integrality"), &pair.sphere, n);
    record_pair(rep, &label, &pair, true, true);
    if sub.generators.is_empty() {
        let (vertex, _) = vertex_pair(s, rep)?;
        rep.check(
            &format!("{label}equals vertex series"),
            vertex.sphere.same_function(&pair.sphere),
            "",
        );
    }
    Ok(())
}

fn cmd_embed(s: &mut Session, rep: &mut RunReport, name: &str) -> Result<()> {
    let spec = s
        .cfg
        .subgraph(name)
        .ok_or_else(|| Error::Input(format!("no subgraph named {name:?} in {}", s.cfg.source)))?;
    s.ensure_combing(rep)?;
    let checked = s.ensure_check(rep)?;
    let z = load_subgraph(s.ball(), name, &spec.words)?;
    rep.info(format!(
        "subgraph {name}: {} vertices, diameter {}, orbit size {}",
        z.vertices.len(),
        z.diameter,
        z.orbit_size
    ));
    let n_check = s.cfg.params.n_check;
    let series = rep.timed(&format!("embed({name}) series"), || {
        embedding_series(s.aut(), s.mats(), &z, s.check_arg(checked), n_check)
    })?;
    prefix_verdict(rep, &format!("embed({name}) prefix"), checked, &series);
    rep.add_series(&format!("embed({name})"), &series);
    Ok(())
}

fn transversal(s: &mut Session, rep: &mut RunReport, h: &str) -> Result<Dfa> {
    let sub = s.subgroup(h)?;
    s.ensure_automaton(rep)?;
    let p = &s.cfg.params;
    s.ensure_ball(rep, (p.ft_const + 1).max(p.k).max(p.r))?;
    let (aut, ball) = (s.aut(), s.ball());
    Ok(rep.timed(&format!("transversal({h})"), || {
        shortlex_transversal_acceptor(aut, ball, sub, p.ft_const, p.r)
    })?)
}

fn cmd_transversal(s: &mut Session, rep: &mut RunReport, h: &str) -> Result<()> {
    let dfa = transversal(s, rep, h)?;
    let r = s.cfg.params.r;
    let counts = dfa.count_by_length(r);
    let oracle = brute_force_counts(s.ball(), &CountKind::Coset(s.subgroup(h)?), r)?;
    rep.info(format!("transversal({h}): {} states", dfa.len()));
    rep.info(format!("transversal({h}) counts: {}", join(&counts)));
    rep.check(
        &format!("transversal({h}) one word per coset"),
        counts == oracle,
        &format!("lengths <= {r} against coset representatives"),
    );
    Ok(())
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn rate_line(
    rep: &mut RunReport,
    label: &str,
    series: &Series,
    spectral: f64,
) -> f64 {
    let g = growth_rate(series);
    let rate = g.approx;
    rep.info(format!(
        "rate {label}: {rate:.10} in [{:.12}, {:.12}] power-iteration {spectral:.10}",
        Scalar::to_f64(&g.bounds.0),
        Scalar::to_f64(&g.bounds.1)
    ));
    rep.check(
        &format!("rate {label} agrees with power iteration"),
        (rate - spectral).abs() <= RATE_TOLERANCE,
        "",
    );
    rate
}

fn cmd_rate(s: &mut Session, rep: &mut RunReport) -> Result<()> {
    let (vertex, _) = vertex_pair(s, rep)?;
    let mats = s.mats();
    let ones = vec![Rational::from_ratio(1, 1); mats.len()];
    let spectral = spectral_rate(mats, &ones, true);
    rate_line(rep, "vertex", &vertex.sphere, spectral);
    let (geo, _) = geodesic_pair(s, rep)?;
    let spectral = spectral_rate(s.mats(), &ones, false);
    rate_line(rep, "geodesic", &geo.sphere, spectral);
    let mut balls: Vec<(String, Series)> = vec![("vertex".into(), vertex.ball.clone())];
    for sub in &s.cfg.subgroups {
        let (pair, _) = coset_pair(s, rep, &sub.name)?;
        let weights = coset_weights(s.aut(), s.mats(), s.ball(), sub)?;
        let spectral = spectral_rate(s.mats(), &weights, true);
        let rate = rate_line(rep, &format!("coset({})", sub.name), &pair.sphere, spectral);
        rep.info(format!(
            "coset({}) exponential growth: {}",
            sub.name,
            if rate > 1.0 + RATE_TOLERANCE { "yes" } else { "no" }
        ));
        balls.push((format!("coset({})", sub.name), pair.ball));
    }
    let refs: Vec<&Series> = balls.iter().map(|(_, b)| b).collect();
    let (q, ok) = common_denominator(&refs);
    rep.info(format!(
        "common denominator of {} ball series: {q}",
        balls.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(", ")
    ));
    rep.check("common denominator clears every series", ok, "");
    Ok(())
}

fn cmd_export(s: &mut Session, rep: &mut RunReport, which: &str) -> Result<()> {
    let alphabet = s.cfg.alphabet().clone();
    let dfa = match which.split_once(':') {
        None if which == "irreducible" => irreducible_dfa(&s.cfg.rewriting).minimize(),
        None if which == "automaton" => {
            s.ensure_automaton(rep)?;
            s.aut().to_dfa(GEODESICS)?
        }
        None if which == "geodesics" || which == "cone-types" => {
            s.ensure_automaton(rep)?;
            cone_type_quotient(s.aut()).dfa
        }
        None if which == "language" => {
            let path = s
                .cfg
                .language
                .as_ref()
                .ok_or_else(|| Error::Input("config has no [language] dfa".into()))?;
            let user = Dfa::import(&alphabet, &fs::read_to_string(path)?)?;
            s.ensure_automaton(rep)?;
            intersect_language(s.aut(), GEODESICS, &user)?.minimize()
        }
        Some(("coset", h)) => {
            let sub = s.subgroup(h)?;
            s.ensure_automaton(rep)?;
            let members = sub.members_within_length(s.ball(), s.cfg.params.k)?;
            let mut aut = s.aut().clone();
            let key = add_coset_accept_set(&mut aut, h, &members);
            aut.to_dfa(&key)?.minimize()
        }
        Some(("transversal", h)) => transversal(s, rep, h)?,
        _ => {
            return Err(Error::Input(format!(
                "unknown DFA {which:?}; expected automaton, geodesics, cone-types, irreducible, language, \
                 coset:H or transversal:H"
            )))
        }
    };
    let text = dfa.export(&alphabet);
    rep.info(format!("dfa {which}: {} states", dfa.len()));
    for line in text.lines() {
        rep.info(format!("  {line}"));
    }
    rep.dfa = Some(text);
    Ok(())
}

fn dispatch(s: &mut Session, rep: &mut RunReport, cmd: &Command) -> Result<()> {
    match cmd {
        Command::CheckConfluence => cmd_confluence(s, rep),
        Command::Complete => cmd_complete(s, rep),
        Command::CheckFftp => cmd_fftp(s, rep)?,
        Command::CheckProjections(h) => cmd_projections(s, rep, h)?,
        Command::BuildAutomaton => cmd_automaton(s, rep)?,
        Command::Growth(k) => cmd_growth(s, rep, *k)?,
        Command::CosetGrowth(h) => cmd_coset(s, rep, h)?,
        Command::EmbedGrowth(z) => cmd_embed(s, rep, z)?,
        Command::ShortlexTransversal(h) => cmd_transversal(s, rep, h)?,
        Command::Rate => cmd_rate(s, rep)?,
        Command::ExportDfa(w) => cmd_export(s, rep, w)?,
        Command::Selftest => return Err(Error::Input("selftest takes no config".into())),
    }
    Ok(())
}

fn input_line(cfg: &JobConfig) -> String {
    format!("{} sha256={}", cfg.source, cfg.digest)
}

/// Runs one subcommand. `selftest` ignores `cfg`; every other command
/// requires it.
pub fn run(cmd: &Command, cfg: Option<&JobConfig>, opts: &RunOptions) -> Result<RunReport> {
    if *cmd == Command::Selftest {
        return selftest(opts);
    }
    let cfg = cfg.ok_or_else(|| Error::Input(format!("{} needs a config file", cmd.label())))?;
    let mut rep = RunReport::new(&cmd.label());
    rep.inputs.push(input_line(cfg));
    let mut session = Session::new(cfg, opts);
    dispatch(&mut session, &mut rep, cmd)?;
    Ok(rep)
}

/// The commands `selftest` runs on one config.
pub fn selftest_plan(cfg: &JobConfig) -> Vec<Command> {
    let mut plan = vec![
        Command::CheckConfluence,
        Command::CheckFftp,
        Command::BuildAutomaton,
        Command::Growth(GrowthKind::Sphere),
        Command::Growth(GrowthKind::Ball),
        Command::Growth(GrowthKind::Geodesic),
    ];
    for h in &cfg.subgroups {
        plan.push(Command::CheckProjections(h.name.clone()));
        plan.push(Command::CosetGrowth(h.name.clone()));
        plan.push(Command::ShortlexTransversal(h.name.clone()));
    }
    for z in &cfg.subgraphs {
        plan.push(Command::EmbedGrowth(z.name.clone()));
    }
    plan.push(Command::Rate);
    plan
}

/// Every bundled example end to end. Module errors are recorded as failed
/// checks so that one broken example does not hide the others.
pub fn selftest(opts: &RunOptions) -> Result<RunReport> {
    let mut rep = RunReport::new("selftest");
    for name in bundled::names() {
        let cfg = bundled::config(name)?;
        rep.inputs.push(input_line(&cfg));
        let mut session = Session::new(&cfg, opts);
        for cmd in selftest_plan(&cfg) {
            let mut sub = RunReport::new(&cmd.label());
            let result = dispatch(&mut session, &mut sub, &cmd);
            let prefix = format!("[{} {}]", cfg.source, cmd.label());
            for l in sub.lines {
                rep.lines.push(format!("{prefix} {l}"));
            }
            for v in sub.verdicts {
                rep.verdicts.push(Verdict {
                    name: format!("{prefix} {}", v.name),
                    outcome: v.outcome,
                });
            }
            for (label, s) in sub.series {
                rep.series.push((format!("{} {label}", cfg.source), s));
            }
            for (label, d) in sub.timings {
                rep.timings.push((format!("{prefix} {label}"), d));
            }
            if let Err(e) = result {
                rep.lines.push(format!("{prefix} FAIL error: {e}"));
                rep.verdicts.push(Verdict {
                    name: format!("{prefix} error"),
                    outcome: Outcome::Fail,
                });
            }
        }
    }
    Ok(rep)
}
