//! One line per acceptance criterion; exits non-zero if any fails.
//!
//! Expected values come from closed forms and from brute-force counts
//! computed here, independently of the automaton and series code.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::process::ExitCode;
use std::time::Instant;

use cannon_growth::automaton::dfa::cone_type_quotient;
use cannon_growth::automaton::transversal::shortlex_transversal_acceptor;
use cannon_growth::automaton::{build_automaton, check_state_semantics, exact_radius, FftpAutomaton, GEODESICS};
use cannon_growth::ball::{load_subgraph, Ball, SubgroupOracle};
use cannon_growth::bundled;
use cannon_growth::config::JobConfig;
use cannon_growth::fellow::{check_fftp, check_projections, replay_fftp, ProjectionMode};
use cannon_growth::growth::{
    coset_series, common_denominator, embedding_series, geodesic_series, growth_rate, required_radius, spectral_rate,
    validate_combing, vertex_series, Check, SeriesPair,
};
use cannon_growth::run::{selftest, RunOptions};
use cannon_growth::words::{shortlex, Letter, Word};
use cannon_growth::{Matrices, Poly, Rational, Series};
use num_bigint::BigInt;

type Outcome = Result<String, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Group {
    cfg: JobConfig,
    aut: FftpAutomaton,
    mats: Matrices,
    /// Large enough for every oracle used below.
    ball: Ball,
}

impl Group {
    fn load(name: &str) -> Result<Group, String> {
        let cfg = bundled::config(name).map_err(fail)?;
        let k = cfg.params.k;
        let small = Ball::build(&cfg.rewriting, 2 * k + 2).map_err(fail)?;
        let aut = build_automaton(&small, k).map_err(fail)?;
        let mats = Matrices::new(&aut).map_err(fail)?;
        let radius = required_radius(&mats, cfg.params.n_check).max(12).max(8 + k).max(2 * k + 2);
        let ball = Ball::build(&cfg.rewriting, radius).map_err(fail)?;
        Ok(Group { cfg, aut, mats, ball })
    }

    fn check(&self) -> Option<Check<'_>> {
        Some(Check { ball: &self.ball })
    }

    fn vertex(&self) -> Result<SeriesPair<Rational>, String> {
        vertex_series(&self.mats, self.check(), self.cfg.params.n_check).map_err(fail)
    }

    fn subgroup(&self, name: &str) -> Result<&SubgroupOracle, String> {
        self.cfg.subgroup(name).ok_or_else(|| format!("no subgroup {name}"))
    }

}

struct Groups(HashMap<&'static str, Group>);

impl Groups {
    fn get(&self, name: &str) -> &Group {
        &self.0[name]
    }
}

const GROUPS: [&str; 4] = ["z2", "f2", "dinf", "s3"];

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

fn series(num: &[i64], den: &[i64]) -> Series {
    Series::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
}

/// All words of length `0..=n` over `letters` letters.
fn all_words(letters: usize, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for x in 0..letters as Letter {
                let mut wx: Vec<Letter> = w.clone();
                wx.push(x);
                next.push(wx);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Schreier graph of `F₂/⟨a⟩` by breadth-first search over right cosets
/// `Hg` with edges `Hg → Hgx`, each named by the reduced word of `g` with
/// leading `a^{±1}` removed. `gH ↦ Hg⁻¹` preserves distance to the
/// basepoint, so the sphere sizes agree with those of left cosets.
fn f2_schreier_spheres(n_max: usize) -> Vec<i64> {
    // Letters a A b B: inverse pairs (0, 1) and (2, 3).
    let step = |c: &[u8], x: u8| {
        let mut v = c.to_vec();
        if v.last() == Some(&(x ^ 1)) {
            v.pop();
        } else {
            v.push(x);
        }
        let lead = v.iter().take_while(|&&y| y < 2).count();
        v.split_off(lead)
    };
    let mut dist: HashMap<Vec<u8>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut queue = VecDeque::from([Vec::new()]);
    let mut spheres = vec![0i64; n_max + 1];
    spheres[0] = 1;
    while let Some(c) = queue.pop_front() {
        let d = dist[&c];
        if d == n_max {
            continue;
        }
        for x in 0..4u8 {
            let nb = step(&c, x);
            if !dist.contains_key(&nb) {
                dist.insert(nb.clone(), d + 1);
                spheres[d + 1] += 1;
                queue.push_back(nb);
            }
        }
    }
    spheres
}

/// Translates `gZ` with every vertex inside the `n`-ball, divided by the
/// number of `g` fixing `Z` setwise.
fn translate_counts(g: &Group, z_words: &[Word], n_max: usize) -> Vec<i64> {
    let ball = &g.ball;
    let reach: Vec<Option<usize>> = (0..ball.ball_size(n_max) as u32)
        .map(|v| {
            z_words
                .iter()
                .map(|z| ball.walk(v, z.letters()).map(|u| ball.dist(u)))
                .collect::<Option<Vec<_>>>()
                .map(|ds| ds.into_iter().max().unwrap())
        })
        .collect();
    let zset: BTreeSet<u32> = z_words.iter().map(|z| ball.walk(0, z.letters()).unwrap()).collect();
    let stabilizer = (0..ball.ball_size(n_max) as u32)
        .filter(|&v| {
            let img: Option<BTreeSet<u32>> = z_words.iter().map(|z| ball.walk(v, z.letters())).collect();
            img.as_ref() == Some(&zset)
        })
        .count() as i64;
    (0..=n_max)
        .map(|n| reach.iter().filter(|r| r.is_some_and(|d| d <= n)).count() as i64 / stabilizer)
        .collect()
}

fn criterion_1(gs: &Groups) -> Outcome {
    let z2 = gs.get("z2");
    let f2 = gs.get("f2");
    let a = check_fftp(&z2.ball, 2, 6).map_err(fail)?;
    ensure(a.pass, "Z2 fails fftp with M=2, R=6")?;
    let b = check_fftp(&f2.ball, 1, 6).map_err(fail)?;
    ensure(b.pass, "F2 fails fftp with M=1, R=6")?;
    let c = check_fftp(&z2.ball, 0, 3).map_err(fail)?;
    let cx = c.counterexample.ok_or("Z2 with M=0, R=3 produced no counterexample")?;
    ensure(!c.pass && replay_fftp(&z2.ball, 0, &cx.word).map_err(fail)?, "counterexample does not replay")?;
    Ok(format!(
        "Z2 M=2 R=6 and F2 M=1 R=6 pass; Z2 M=0 R=3 fails on {} (replayed)",
        z2.cfg.alphabet().format_word(&cx.word)
    ))
}

fn criterion_2(gs: &Groups) -> Outcome {
    let mut words = 0;
    for name in GROUPS {
        let g = gs.get(name);
        let (k, m) = (g.cfg.params.k, g.cfg.params.m);
        ensure(k == m * m, format!("{name}: K != M^2"))?;
        let r = check_state_semantics(&g.aut, &g.ball, 8, exact_radius(k)).map_err(|e| format!("{name}: {e}"))?;
        // Independent tally of geodesic words.
        let geodesic = all_words(g.cfg.alphabet().len(), 8)
            .iter()
            .filter(|w| g.ball.walk(0, w).is_some_and(|v| g.ball.dist(v) == w.len()))
            .count() as u64;
        ensure(r.geodesic_words == geodesic, format!("{name}: geodesic word count differs"))?;
        words += r.geodesic_words + r.non_geodesic_words;
    }
    Ok(format!("{words} words of length <= 8 in four groups; offsets exact on the M-ball"))
}

fn criterion_3(gs: &Groups) -> Outcome {
    let mut vertices = 0;
    for name in GROUPS {
        let g = gs.get(name);
        let r = validate_combing::<Rational>(&g.aut, &g.ball, 8).map_err(fail)?;
        ensure(r.pass, format!("{name}: weights do not sum to 1 at {:?}", r.worst))?;
        vertices += r.vertices;
    }
    Ok(format!("{vertices} vertices of radius <= 8 have total weight exactly 1"))
}

fn criterion_4(gs: &Groups) -> Outcome {
    type ClosedForm = (&'static str, Series, fn(usize) -> i64);
    let closed: [ClosedForm; 3] = [
        ("z2", series(&[1, 2, 1], &[1, -2, 1]), |n| if n == 0 { 1 } else { 4 * n as i64 }),
        ("f2", series(&[1, 1], &[1, -3]), |n| if n == 0 { 1 } else { 4 * 3i64.pow(n as u32 - 1) }),
        ("dinf", series(&[1, 1], &[1, -1]), |n| if n == 0 { 1 } else { 2 }),
    ];
    for (name, expected, formula) in closed {
        let g = gs.get(name);
        let pair = g.vertex()?;
        ensure(pair.sphere.same_function(&expected), format!("{name}: sphere is {}", pair.sphere))?;
        let want: Vec<i64> = (0..12).map(formula).collect();
        let brute: Vec<i64> = g.ball.sphere_sizes()[..12].iter().map(|&c| c as i64).collect();
        ensure(brute == want, format!("{name}: brute force {brute:?}"))?;
        ensure(pair.sphere.expand(12) == ints(&want), format!("{name}: coefficients differ"))?;
        let over = Series::new(
            pair.sphere.num().clone(),
            pair.sphere.den() * &Poly::one_minus_t(),
        )
        .map_err(fail)?;
        ensure(pair.ball.same_function(&over), format!("{name}: ball != sphere/(1-t)"))?;
        let mut acc = 0;
        let cum: Vec<i64> = want.iter().map(|c| { acc += c; acc }).collect();
        ensure(pair.ball.expand(12) == ints(&cum), format!("{name}: ball coefficients differ"))?;
    }
    Ok("Z2, F2, Dinf spheres match closed forms to n=11; ball = sphere/(1-t) exactly".into())
}

fn criterion_5(gs: &Groups) -> Outcome {
    let z2 = gs.get("z2");
    let geo = geodesic_series(&z2.mats, z2.check(), z2.cfg.params.n_check).map_err(fail)?;
    let prefix = &z2.mats.sequence(&vec![Rational::from_integer(1.into()); z2.mats.len()], false, 4);
    ensure(*prefix == ints(&[1, 4, 12, 28]), format!("Z2 count-matrix prefix {prefix:?}"))?;
    ensure(geo.sphere.expand(4) == ints(&[1, 4, 12, 28]), "Z2 geodesic series prefix differs")?;
    let f2 = gs.get("f2");
    let fg = geodesic_series(&f2.mats, f2.check(), f2.cfg.params.n_check).map_err(fail)?;
    ensure(fg.sphere.same_function(&f2.vertex()?.sphere), "F2 geodesic series != sphere series")?;
    Ok(format!(
        "Z2 geodesic prefix 1,4,12,28 (num={} den={}); F2 geodesic = sphere",
        geo.sphere.num(),
        geo.sphere.den()
    ))
}

fn criterion_6(gs: &Groups) -> Outcome {
    let f2 = gs.get("f2");
    let ha = f2.subgroup("Ha")?;
    let pair = coset_series(&f2.aut, &f2.mats, &f2.ball, ha, f2.check(), 13).map_err(fail)?;
    ensure(pair.sphere.same_function(&series(&[1, -1], &[1, -3])), format!("F2/<a> sphere {}", pair.sphere))?;
    ensure(pair.ball.same_function(&series(&[1], &[1, -3])), format!("F2/<a> ball {}", pair.ball))?;
    let bfs = f2_schreier_spheres(12);
    ensure(pair.sphere.expand(13) == ints(&bfs), format!("Schreier BFS {bfs:?}"))?;
    ensure(pair.sphere.prefix().len() >= 13, "verified prefix shorter than 13")?;

    let s3 = gs.get("s3");
    let ws = s3.subgroup("Ws")?;
    let sp = coset_series(&s3.aut, &s3.mats, &s3.ball, ws, s3.check(), s3.cfg.params.n_check).map_err(fail)?;
    ensure(sp.sphere.is_polynomial() && sp.sphere.same_function(&series(&[1, 1, 1], &[1])), format!("S3/Ws {}", sp.sphere))?;

    let vertex = f2.vertex()?;
    let geo = geodesic_series(&f2.mats, f2.check(), f2.cfg.params.n_check).map_err(fail)?;
    let all = [&vertex.sphere, &vertex.ball, &geo.sphere, &geo.ball, &pair.sphere, &pair.ball];
    let (q, ok) = common_denominator(&all);
    ensure(ok, "common denominator does not clear every F2 series")?;
    ensure(all.iter().all(|s| s.cleared_by(&q)), "certificate fails on recheck")?;
    Ok(format!("F2/<a> matches BFS to n=12; S3/Ws = 1+t+t^2; F2 cleared by {q}"))
}

fn criterion_7(gs: &Groups) -> Outcome {
    let cones = [("z2", 9), ("f2", 5), ("dinf", 3)];
    for name in GROUPS {
        let g = gs.get(name);
        let dfa = g.aut.to_dfa(GEODESICS).map_err(fail)?;
        for w in all_words(g.cfg.alphabet().len(), 8) {
            let v = g.ball.walk(0, &w).ok_or("word outside ball")?;
            if dfa.accepts(&w) != (g.ball.dist(v) == w.len()) {
                return Err(format!("{name}: acceptor disagrees on {}", g.cfg.alphabet().format_word(&Word::from_letters(&w))));
            }
        }
    }
    for (name, want) in cones {
        let got = cone_type_quotient(&gs.get(name).aut).count;
        ensure(got == want, format!("{name}: {got} cone types, expected {want}"))?;
    }
    let mut checked = Vec::new();
    for name in GROUPS {
        let g = gs.get(name);
        for h in &g.cfg.subgroups {
            let dfa = shortlex_transversal_acceptor(&g.aut, &g.ball, h, g.cfg.params.ft_const, 8).map_err(fail)?;
            let rs = &g.cfg.rewriting;
            let members = h.members_up_to(rs, 16).map_err(fail)?;
            // Name of the coset gH: its shortlex-least element of length
            // <= 8. Any such element is g·h with |h| <= 16.
            let coset_of = |g: &Word| -> Option<Word> {
                let mut within: Vec<Word> = members
                    .iter()
                    .map(|m| rs.normalize(&g.concat(m)))
                    .filter(|e| e.len() <= 8)
                    .collect();
                within.sort_by(|a, b| shortlex(a.letters(), b.letters()));
                within.into_iter().next()
            };
            let mut seen: HashMap<Word, usize> = HashMap::new();
            let mut per_length = vec![0i64; 9];
            for w in all_words(g.cfg.alphabet().len(), 8).into_iter().filter(|w| dfa.accepts(w)) {
                let coset = coset_of(&Word::from_letters(&w)).ok_or("accepted word too long")?;
                *seen.entry(coset).or_default() += 1;
                per_length[w.len()] += 1;
            }
            ensure(seen.values().all(|&c| c == 1), format!("{name}/{}: coset accepted twice", h.name))?;
            // Schreier spheres: each coset counted once, at the length of its least element.
            let mut schreier = vec![0i64; 9];
            for v in 0..g.ball.ball_size(8) as u32 {
                if coset_of(g.ball.word(v)).as_ref() == Some(g.ball.word(v)) {
                    schreier[g.ball.dist(v)] += 1;
                }
            }
            ensure(per_length == schreier, format!("{name}/{}: {per_length:?} vs {schreier:?}", h.name))?;
            let counts: Vec<BigInt> = dfa.count_by_length(8);
            ensure(counts == schreier.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), "count_by_length differs")?;
            checked.push(format!("{name}/{}", h.name));
        }
    }
    Ok(format!("geodesic acceptors exact to length 8; cone types 9/5/3; transversals {}", checked.join(" ")))
}

fn criterion_8(gs: &Groups) -> Outcome {
    let cases = [("z2", ints(&[0, 2, 8])), ("dinf", ints(&[0, 1, 2]))];
    let mut out = Vec::new();
    for (name, head) in cases {
        let g = gs.get(name);
        let spec = g.cfg.subgraph("edge").ok_or("no edge subgraph")?;
        let z = load_subgraph(&g.ball, &spec.name, &spec.words).map_err(fail)?;
        let s = embedding_series(&g.aut, &g.mats, &z, g.check(), g.cfg.params.n_check).map_err(fail)?;
        let brute = translate_counts(g, &spec.words, 10);
        ensure(s.expand(11) == ints(&brute), format!("{name}: {} vs {brute:?}", s))?;
        ensure(s.expand(3) == head, format!("{name}: prefix {:?}", s.expand(3)))?;
        out.push(format!("{name} {brute:?}"));
    }
    Ok(format!("edge translates match brute force to n=10: {}", out.join("; ")))
}

fn criterion_9(gs: &Groups) -> Outcome {
    let f2 = gs.get("f2");
    let one = || vec![Rational::from_integer(1.into()); f2.mats.len()];
    let three = Rational::from_integer(3.into());
    let tol = Rational::new(1.into(), 1_000_000_000.into());
    let vertex = f2.vertex()?;
    let ha = f2.subgroup("Ha")?;
    let coset = coset_series(&f2.aut, &f2.mats, &f2.ball, ha, f2.check(), f2.cfg.params.n_check).map_err(fail)?;
    let weights = cannon_growth::growth::coset_weights(&f2.aut, &f2.mats, &f2.ball, ha).map_err(fail)?;
    let mut lines = Vec::new();
    for (label, s, w) in [("F2", &vertex.sphere, one()), ("F2/<a>", &coset.sphere, weights)] {
        let r = growth_rate(s);
        let (lo, hi) = r.bounds.clone();
        ensure(lo <= three && three <= hi && hi.clone() - lo.clone() <= tol, format!("{label}: bounds [{lo}, {hi}]"))?;
        ensure(r.root.is_some() && lo > Rational::from_integer(1.into()), format!("{label}: rate not > 1"))?;
        let spectral = spectral_rate(&f2.mats, &w, true);
        ensure((spectral - r.approx).abs() <= 1e-6, format!("{label}: power iteration {spectral}"))?;
        lines.push(format!("{label} {:.10} (power {:.10})", r.approx, spectral));
    }
    let z2 = gs.get("z2");
    let zr = growth_rate(&z2.vertex()?.sphere);
    ensure(zr.root.is_none() && zr.approx == 1.0, format!("Z2 rate {}", zr.approx))?;
    let zs = spectral_rate(&z2.mats, &vec![Rational::from_integer(1.into()); z2.mats.len()], true);
    ensure((zs - 1.0).abs() <= 1e-6, format!("Z2 power iteration {zs}"))?;
    Ok(format!("{}; Z2 1", lines.join("; ")))
}

fn criterion_10(gs: &Groups) -> Outcome {
    let mut runs = Vec::new();
    for (name, h) in [("s3", "Ws"), ("f2", "Ha")] {
        let g = gs.get(name);
        let r = g.cfg.params.r;
        let ball = Ball::build(&g.cfg.rewriting, 2 * r).map_err(fail)?;
        let sub = g.subgroup(h)?;
        let bounded = check_projections(&ball, sub, 1, r, ProjectionMode::Bounded).map_err(fail)?;
        let fellow = check_projections(&ball, sub, 1, r, ProjectionMode::Fellow).map_err(fail)?;
        ensure(bounded.pass, format!("{name}/{h}: bounded projections fail: {:?}", bounded.counterexample))?;
        ensure(!bounded.pass || fellow.pass, format!("{name}/{h}: bounded passes but fellow fails"))?;
        runs.push(format!("{name}/{h} R={r}"));
    }
    // Meta-check across every bundled subgroup and small constants.
    let mut meta = 0;
    for name in GROUPS {
        let g = gs.get(name);
        for sub in &g.cfg.subgroups {
            for m in 0..=2 {
                let bounded = check_projections(&g.ball, sub, m, 4, ProjectionMode::Bounded).map_err(fail)?;
                let fellow = check_projections(&g.ball, sub, m, 4, ProjectionMode::Fellow).map_err(fail)?;
                ensure(!bounded.pass || fellow.pass, format!("{name}/{} M={m}: meta-check fails", sub.name))?;
                meta += 1;
            }
        }
    }
    Ok(format!("M=1 bounded projections pass for {}; bounded => fellow on {meta} runs", runs.join(", ")))
}

fn criterion_11() -> Outcome {
    let opts = RunOptions::default();
    let a = selftest(&opts).map_err(fail)?;
    let b = selftest(&opts).map_err(fail)?;
    ensure(a.pass(), "selftest reports failures")?;
    ensure(a.render_body() == b.render_body(), "selftest output differs between runs")?;
    Ok(format!("two selftest runs identical ({} bytes, {} checks)", a.render_body().len(), a.verdicts.len()))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let groups = GROUPS.iter().map(|&n| Group::load(n).map(|g| (n, g))).collect::<Result<HashMap<_, _>, _>>();
    let groups = match groups {
        Ok(g) => Groups(g),
        Err(e) => {
            println!("FAIL setup: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: [(usize, &str, &dyn Fn() -> Outcome); 11] = [
        (1, "fftp certification", &|| criterion_1(&groups)),
        (2, "state semantics", &|| criterion_2(&groups)),
        (3, "Markov combing", &|| criterion_3(&groups)),
        (4, "growth series", &|| criterion_4(&groups)),
        (5, "geodesic growth", &|| criterion_5(&groups)),
        (6, "coset growth", &|| criterion_6(&groups)),
        (7, "regular languages", &|| criterion_7(&groups)),
        (8, "embedding growth", &|| criterion_8(&groups)),
        (9, "growth rates", &|| criterion_9(&groups)),
        (10, "projection hypotheses", &|| criterion_10(&groups)),
        (11, "determinism", &criterion_11),
    ];
    let mut failed = 0;
    for (n, title, f) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({title}): {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} ({title}): {detail} [{secs:.1}s]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed [{:.1}s]",
        11 - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
