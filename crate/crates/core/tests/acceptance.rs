//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use common::{brute_valid, cond_table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::time::{Duration, Instant};
use trivalent_core::algebra::*;
use trivalent_core::corpus::{cross_check, deduction_instances, formulas, random_formula, standard_corpus};
use trivalent_core::exec::{self, Execution};
use trivalent_core::props::{self, Cell};
use trivalent_core::semantics::{assertability, deduction_theorem, distinguishing, World, WorldDistribution};
use trivalent_core::sequent::{search_with_strategy, Position, SearchOutcome, Sequent};
use trivalent_core::tableau::{deduce, Deduction};
use trivalent_core::{
    entails, eval, parse, Calculus, Conditional, Connectives, Formula, Inference, LogicConfig, Scheme,
    TruthValue, Valuation,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn tv(u: u8) -> TruthValue {
    [TruthValue::Zero, TruthValue::Half, TruthValue::One][u as usize]
}

fn v2(x: u8, y: u8) -> Valuation {
    let mut v = Valuation::new();
    v.set("p", tv(x));
    v.set("q", tv(y));
    v
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn table_fidelity() -> Check {
    let mut n = 0;
    for c in Conditional::JEFFREY.into_iter().chain([Conditional::DF]) {
        for x in 0..3 {
            for y in 0..3 {
                let got = eval(&f("p -> q"), &v2(x, y), LogicConfig::kleene(c)).map_err(|e| e.to_string())?;
                ensure(got == tv(cond_table(c)[x as usize][y as usize]), || format!("{c} at ({x}, {y}): {got}"))?;
                n += 1;
            }
        }
    }
    let mut m = 0;
    for x in 0..3u8 {
        let got = eval(&f("~p"), &v2(x, 0), LogicConfig::kleene(Conditional::DF)).unwrap();
        ensure(got == tv(2 - x), || format!("negation at {x}"))?;
        m += 1;
    }
    for (conn, and, or) in [
        (Connectives::Kleene, [[0, 0, 0], [0, 1, 1], [0, 1, 2]], [[0, 1, 2], [1, 1, 2], [2, 2, 2]]),
        (Connectives::CooperQuasi, [[0, 0, 0], [0, 1, 2], [0, 2, 2]], [[0, 0, 2], [0, 1, 2], [2, 2, 2]]),
    ] {
        let cfg = LogicConfig { conditional: Conditional::DF, connectives: conn };
        for x in 0..3u8 {
            for y in 0..3u8 {
                let a = eval(&f("p & q"), &v2(x, y), cfg).unwrap();
                let o = eval(&f("p | q"), &v2(x, y), cfg).unwrap();
                ensure(a == tv(and[x as usize][y as usize]), || format!("{conn:?} and at ({x}, {y})"))?;
                ensure(o == tv(or[x as usize][y as usize]), || format!("{conn:?} or at ({x}, {y})"))?;
                m += 2;
            }
        }
    }
    Ok(format!("{n} conditional and {m} connective entries"))
}

fn expected_marks(m: &props::Matrix, expected: &[(&str, &str)]) -> Result<(), String> {
    let want: Vec<(String, String)> = expected.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ensure(m.marks() == want, || format!("got {:?}", m.marks()))
}

fn refuted(cell: &Cell, i: &Inference, cfg: LogicConfig, scheme: Scheme) -> Result<(), String> {
    if let Cell::Invalid { witness, .. } = cell {
        ensure(i.refuted_by(witness, cfg, scheme).unwrap_or(false), || format!("{witness} does not refute {i}"))?;
    }
    Ok(())
}

fn trilemma() -> Check {
    let m = props::trilemma().map_err(|e| e.to_string())?;
    expected_marks(&m, &[("SS", "✓×✓"), ("TT", "×✓×"), ("ST", "✓✓✓"), ("TS", "×××"), ("SS∩TT", "×××")])?;
    let principles = [
        Inference::new(vec![f("A"), f("A -> B")], f("B")),
        Inference::new(vec![], f("A -> A")),
        Inference::new(vec![f("A -> B")], f("B -> A")),
    ];
    let cfg = LogicConfig::kleene(Conditional::DF);
    let mut crosses = 0;
    for (scheme, (_, cells)) in Scheme::ALL.into_iter().zip(&m.rows) {
        for (cell, i) in cells.iter().zip(&principles) {
            refuted(cell, i, cfg, scheme)?;
            ensure(cell.is_valid() == brute_valid(&i.premises, &i.conclusions, cfg, scheme), || format!("{scheme} {i}"))?;
            crosses += usize::from(!cell.is_valid());
        }
    }
    Ok(format!("15 cells, {crosses} countermodels re-verified"))
}

fn commutation() -> Check {
    let m = props::commutation().map_err(|e| e.to_string())?;
    expected_marks(&m, &[("CC", "✓✓"), ("F", "×✓"), ("J1", "××"), ("J2", "✓×")])?;
    let dirs = [Inference::new(vec![f("~(A -> B)")], f("A -> ~B")), Inference::new(vec![f("A -> ~B")], f("~(A -> B)"))];
    for (c, (_, cells)) in Conditional::JEFFREY.into_iter().zip(&m.rows) {
        for (cell, i) in cells.iter().zip(&dirs) {
            refuted(cell, i, LogicConfig::kleene(c), Scheme::TT)?;
        }
    }
    Ok("8 cells".into())
}

fn provers(corpus: &[Inference]) -> (Check, Check) {
    let mut soundness = Vec::new();
    let mut report = Vec::new();
    let mut bad = Vec::new();
    for calc in Calculus::ALL {
        let r = cross_check(corpus, calc, Execution::default());
        let unsound = r.discrepancies.iter().filter(|d| d.problem.contains("does not refute") || d.problem.contains(" fails at ")).count();
        soundness.push(unsound);
        report.push(format!("{calc}: {} checked, {} valid, {} discrepancies", r.checked, r.valid, r.discrepancies.len()));
        bad.extend(r.discrepancies.into_iter().take(3));
    }
    let four = if bad.is_empty() { Ok(report.join("; ")) } else { Err(format!("{bad:?}")) };
    let five = if soundness.iter().all(|n| *n == 0) {
        Ok("every countermodel refutes, every derived root is valid".to_string())
    } else {
        Err(format!("unsound objects: {soundness:?}"))
    };
    (four, five)
}

fn derivations() -> Check {
    let d = deduce(&[f("~(A -> B)")], &f("A -> ~B"), Calculus::Cc).map_err(|e| e.to_string())?;
    let Deduction::Derivable { tableaux } = d else { return Err("¬(A→B) ⊢ A→¬B not derivable by tableau".into()) };
    ensure(tableaux.len() == 2, || "expected two tableaux".into())?;
    ensure(tableaux[1].render_text() == golden("cc_commutation_tableau_1.txt"), || "tableau at 1 differs from golden".into())?;
    ensure(tableaux[0].render_text() == golden("cc_commutation_tableau_half.txt"), || "tableau at 1/2 differs from golden".into())?;
    let d = deduce(&[f("A -> ~B")], &f("~(A -> B)"), Calculus::Cc).map_err(|e| e.to_string())?;
    ensure(d.is_derivable(), || "A→¬B ⊢ ¬(A→B) not derivable by tableau".into())?;

    use Position::{Delta, Gamma, Sigma};
    let runs: [(&str, [(&str, Position); 6], &str); 2] = [
        (
            "~(A -> B) | A -> ~B | A -> ~B",
            [("~(A -> B)", Gamma), ("A -> ~B", Delta), ("~B", Delta), ("A -> B", Sigma), ("A -> ~B", Sigma), ("~B", Sigma)],
            "cc_commutation_derivation_1.txt",
        ),
        (
            "A -> ~B | ~(A -> B) | ~(A -> B)",
            [("~(A -> B)", Sigma), ("~(A -> B)", Delta), ("A -> B", Delta), ("A -> B", Gamma), ("A -> ~B", Gamma), ("~B", Gamma)],
            "cc_commutation_derivation_2.txt",
        ),
    ];
    for (root, order, file) in runs {
        let order: Vec<(Formula, Position)> = order.iter().map(|(x, p)| (f(x), *p)).collect();
        let script = |s: &Sequent| order.iter().find(|(x, p)| s.side(*p).contains(x)).cloned();
        let root = Sequent::parse(root).map_err(|e| e.to_string())?;
        match search_with_strategy(&root, Calculus::Cc, &script).map_err(|e| e.to_string())? {
            SearchOutcome::Derivation(tree) => ensure(tree.render_text() == golden(file), || format!("{file} differs"))?,
            _ => return Err(format!("{root} has no derivation")),
        }
    }
    Ok("2 closed tableaux, 2 derivations match golden files".into())
}

fn deduction(corpus: &[Inference]) -> Check {
    let instances: Vec<_> = corpus.iter().flat_map(deduction_instances).collect();
    for c in Conditional::JEFFREY {
        let cfg = LogicConfig::kleene(c);
        let failed = exec::find_first(instances.len(), Execution::default(), |k| {
            let (g, a, b) = &instances[k];
            let dt = deduction_theorem(g, a, b, cfg, Scheme::TT).ok()?;
            (!(dt.introduction && dt.elimination)).then(|| format!("{c}: Γ = {g:?}, A = {a}, B = {b}"))
        });
        if let Some(x) = failed {
            return Err(x);
        }
    }
    let mut witnesses = Vec::new();
    for scheme in [Scheme::SS, Scheme::ST, Scheme::TS, Scheme::SSandTT] {
        let (va, vb) = match scheme {
            Scheme::SS | Scheme::ST => (TruthValue::Half, TruthValue::Zero),
            _ => (TruthValue::Zero, TruthValue::One),
        };
        for c in Conditional::JEFFREY {
            let cfg = LogicConfig::kleene(c);
            let d = props::deduction_failure(cfg, scheme).map_err(|e| e.to_string())?.ok_or(format!("{c} {scheme}: no failure"))?;
            ensure(!d.introduction && d.elimination, || format!("{c} {scheme}: wrong direction fails"))?;
            ensure((d.value_a, d.value_b) == (va, vb), || format!("{c} {scheme}: v(A), v(B) = {}, {}", d.value_a, d.value_b))?;
            let fails = Inference::new(vec![], Formula::cond(d.a.clone(), d.b.clone()));
            ensure(fails.refuted_by(&d.witness, cfg, scheme).unwrap_or(false), || format!("{c} {scheme}: witness"))?;
            let holds = Inference::new(vec![d.a.clone()], d.b.clone());
            ensure(entails(&holds, cfg, scheme).map_err(|e| e.to_string())?.is_valid(), || format!("{c} {scheme}: A ⊭ B"))?;
        }
        witnesses.push(format!("{scheme} v(A)={va}, v(B)={vb}"));
    }
    Ok(format!("{} instances × 4 conditionals under TT; fails at {}", instances.len(), witnesses.join(", ")))
}

fn algebra_suite() -> Check {
    let df3 = canonical_df3();
    for class in [Class::DeFinetti, Class::LP] {
        let r = check_class(&df3, class);
        ensure(r.holds(), || format!("df3 fails {class}: {:?}", r.failures().collect::<Vec<_>>()))?;
    }
    let cc3 = canonical_cc3();
    ensure(check_class(&cc3, Class::CooperCantwell).holds(), || "cc3 fails CooperCantwell".into())?;
    let h = cc3.element("1/2").unwrap();
    for x in 0..3 {
        let w = relative_pseudocomplement(&cc3, cc3.neg[x], h).map_err(|e| e.to_string())?;
        for y in 0..3 {
            let t = cc3.join[cc3.neg[w]][cc3.meet[w][y]];
            ensure(t == cond_table(Conditional::CC)[x][y] as usize, || format!("▷ at ({x}, {y})"))?;
        }
    }
    ensure(!check_class(&boolean2(), Class::DeFinetti).holds(), || "Boolean algebra passes DeFinetti".into())?;
    for a in [&df3, &cc3] {
        let (z, o) = (a.element("0").unwrap(), a.element("1").unwrap());
        for x in 0..3 {
            let l = relative_pseudocomplement(a, x, z).unwrap();
            let r = relative_pseudocomplement(a, a.neg[x], x).unwrap();
            ensure(a.join[l][r] == o, || format!("L3 axiom at {}", a.name(x)))?;
        }
    }
    Ok("df3 ∈ DeFinetti ∩ LP, cc3 ∈ CooperCantwell, ▷ = CC, bool2 ∉ DeFinetti, L3 axiom".into())
}

/// Depth-3 theorems with one immediate part of depth 2 against every part of
/// depth ≤ 1, negations of every depth-2 formula, the depth ≤ 2 part of the
/// prover corpus, and seeded inferences with up to two depth-3 premises.
fn algebraic_corpus(prover_corpus: &[Inference]) -> Vec<Inference> {
    let small = formulas(&["p", "q"], 1);
    let two = formulas(&["p", "q"], 2);
    let mut out: Vec<Inference> = prover_corpus.iter().filter(|i| i.atoms().len() <= 2).cloned().collect();
    for x in &two[small.len()..] {
        out.push(Inference::new(vec![], Formula::not(x.clone())));
        for y in &small {
            for (a, b) in [(x, y), (y, x)] {
                out.push(Inference::new(vec![], Formula::and(a.clone(), b.clone())));
                out.push(Inference::new(vec![], Formula::or(a.clone(), b.clone())));
                out.push(Inference::new(vec![], Formula::cond(a.clone(), b.clone())));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5000 {
        let k = rng.random_range(0..=2);
        let premises = (0..k).map(|_| random_formula(&mut rng, &["p", "q"], 3)).collect();
        out.push(Inference::new(premises, random_formula(&mut rng, &["p", "q"], 3)));
    }
    out
}

fn algebraic_consequence(corpus: &[Inference]) -> Check {
    let pairs = [(canonical_df3(), Conditional::DF), (canonical_cc3(), Conditional::CC)];
    for (alg, c) in &pairs {
        let d = [alg.element("1/2").unwrap(), alg.element("1").unwrap()];
        let cfg = LogicConfig::kleene(*c);
        let bad = exec::find_first(corpus.len(), Execution::default(), |k| {
            let i = &corpus[k];
            let a = algebra_entails(i, alg, &d).ok()?;
            let s = entails(i, cfg, Scheme::TT).ok()?;
            let same = match &a {
                AlgebraVerdict::Valid => s.is_valid(),
                AlgebraVerdict::Countermodel(m) => as_valuation(m).as_ref() == s.countermodel(),
            };
            (!same).then(|| format!("{c}: {i}"))
        });
        if let Some(x) = bad {
            return Err(x);
        }
    }
    Ok(format!("{} inferences × 2 algebras", corpus.len()))
}

fn lindenbaum_tarski() -> Check {
    let df = check_equiv_transitivity(LogicConfig::kleene(Conditional::DF)).map_err(|e| e.to_string())?;
    let want = Valuation::parse_assignment("A=1,B=1/2,C=0").unwrap();
    ensure(df.counterexamples.contains(&want), || format!("DF counterexamples {:?}", df.counterexamples))?;
    let cc = check_equiv_transitivity(LogicConfig::kleene(Conditional::CC)).map_err(|e| e.to_string())?;
    ensure(cc.transitive(), || "CC equivalence not transitive".into())?;
    let neg = check_congruence(LogicConfig::kleene(Conditional::CC), Connective::Neg).map_err(|e| e.to_string())?;
    let w = neg.failure.ok_or("CC negation congruence passes")?;
    ensure((w.left.clone(), w.right.clone()) == (Formula::Top, f("F -> T")), || format!("witness {} / {}", w.left, w.right))?;
    let mut checked = 0;
    for c in Connective::ALL {
        let r = check_congruence(LogicConfig::kleene(Conditional::DF), c).map_err(|e| e.to_string())?;
        ensure(r.passes(), || format!("DF {c:?}: {:?}", r.failure))?;
        checked += r.pairs_checked;
    }
    let case = &algebraizability_counterexample_check()[0];
    ensure((case.b.as_str(), case.c.as_str()) == ("1", "1/2"), || "first case".into())?;
    ensure(!case.identity && case.translation_designated, || format!("{case:?}"))?;
    Ok(format!("DF (1,1/2,0), CC transitive, CC ¬ fails at (⊤, ⊥→⊤), DF passes {checked} pairs, e(B)=1 e(C)=1/2 designated"))
}

fn adams() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = w.iter().sum();
        let mut worlds = Vec::new();
        for (k, x) in w.iter().enumerate() {
            let world: World = [("a".to_string(), k & 2 != 0), ("c".to_string(), k & 1 != 0)].into_iter().collect();
            worlds.push((world, x / total));
        }
        let d = WorldDistribution::from_f64(worlds).map_err(|e| e.to_string())?;
        let ratio = (w[3] / total) / ((w[2] + w[3]) / total);
        for c in [Conditional::DF, Conditional::CC] {
            let a = assertability(&f("a -> c"), &d, LogicConfig::kleene(c)).map_err(|e| e.to_string())?;
            worst = worst.max((a.value - ratio).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("100 distributions, max error {worst:.1e}"))
}

fn contrasts() -> Check {
    let ds = Inference::new(vec![f("~A"), f("A | B")], f("B"));
    for c in [Conditional::DF, Conditional::CC] {
        let k = entails(&ds, LogicConfig::kleene(c), Scheme::TT).map_err(|e| e.to_string())?;
        let q = entails(&ds, LogicConfig::quasi(c), Scheme::TT).map_err(|e| e.to_string())?;
        ensure(!k.is_valid() && q.is_valid(), || format!("{c}: Kleene {k:?}, quasi {q:?}"))?;
    }
    let (x, y) = (f("A -> (B -> C)"), f("A & B -> C"));
    let kleene = LogicConfig::kleene(Conditional::DF);
    ensure(distinguishing(&x, &y, kleene).map_err(|e| e.to_string())?.is_none(), || "Import-Export fails for DF".into())?;
    let quasi = LogicConfig::quasi(Conditional::DF);
    let w = distinguishing(&x, &y, quasi).map_err(|e| e.to_string())?.ok_or("Import-Export holds for DF/quasi")?;
    let (vx, vy) = (eval(&x, &w, quasi).unwrap(), eval(&y, &w, quasi).unwrap());
    ensure(vx != vy, || "witness does not separate".into())?;
    Ok(format!("DS ×/✓ for DF and CC; Import-Export fails for DF/quasi at {w}: {vx} vs {vy}"))
}

type Row = (u32, &'static str, Duration, Duration, Check);

fn main() {
    let corpus = standard_corpus();
    let mut results: Vec<Row> = Vec::new();
    let timed = |n: u32, name: &'static str, budget: u64, run: &mut dyn FnMut() -> Check| {
        let t = Instant::now();
        let r = run();
        (n, name, t.elapsed(), Duration::from_secs(budget), r)
    };
    results.push(timed(1, "table fidelity", 1, &mut table_fidelity));
    results.push(timed(2, "trilemma matrix", 1, &mut trilemma));
    results.push(timed(3, "commutation matrix", 1, &mut commutation));
    let mut five = None;
    results.push(timed(4, "prover-oracle equivalence", 60, &mut || {
        let (a, b) = provers(&corpus);
        five = Some(b);
        a
    }));
    let t4 = results[3].2;
    results.push((5, "countermodel and derivation soundness", t4, Duration::from_secs(60), five.unwrap()));
    results.push(timed(6, "derivations and tableaux", 1, &mut derivations));
    results.push(timed(7, "deduction theorem", 30, &mut || deduction(&corpus)));
    results.push(timed(8, "algebra suite", 1, &mut algebra_suite));
    let algebraic = algebraic_corpus(&corpus);
    results.push(timed(9, "algebraic consequence", 10, &mut || algebraic_consequence(&algebraic)));
    results.push(timed(10, "Lindenbaum-Tarski preconditions", 1, &mut lindenbaum_tarski));
    results.push(timed(11, "Adams' Thesis", 1, &mut adams));
    results.push(timed(12, "connective-suite contrasts", 1, &mut contrasts));

    let mut failed = 0;
    for (n, name, took, budget, r) in &results {
        let over = took > budget;
        let (status, detail) = match r {
            Ok(d) if !over => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over the {}s budget", budget.as_secs())),
            Err(e) => ("FAIL", e.clone()),
        };
        failed += usize::from(status == "FAIL");
        println!("criterion {n:>2} {status} {name} ({:.2}s): {detail}", took.as_secs_f64());
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
