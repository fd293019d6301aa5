//! One check per acceptance criterion. Each prints a PASS or FAIL line; the
//! test fails if any criterion does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use mik_core::model::{add_statement, Atom, Formula, Literal, Statement};
use mik_core::reason::{abduce, chain, confusion, learn_necessary, parse_table, weight, Example};
use mik_core::semantics::oracle::LiteralOracle;
use mik_core::{
    build_kb, parse_formula, parse_kb, parse_query, print_kb, Config, KnowledgeBase, Model, Query,
    SourceText, VerdictKind,
};
use num_rational::Ratio;
use rand::Rng;

fn model(kb: &KnowledgeBase) -> Model<'_> {
    Model::new(kb, &Config::default()).unwrap()
}

fn f(s: &str) -> Formula {
    parse_formula(&SourceText::stdin(s)).unwrap()
}

fn fs(items: &[&str]) -> Vec<Formula> {
    items.iter().map(|s| f(s)).collect()
}

fn lit(s: &str) -> Literal {
    Literal::from_text(s)
}

fn lits(items: &[&str]) -> Vec<Literal> {
    items.iter().map(|s| lit(s)).collect()
}

fn defeasible(m: &Model<'_>, goal: &str, facts: &[&str]) -> VerdictKind {
    m.defeasible_query(&lits(facts), &lit(goal)).unwrap().kind
}

fn tweety() {
    let kb = load(&["tweety.mik"]);
    let m = model(&kb);
    let blocked = m
        .defeasible_query(&lits(&["penguin"]), &lit("flies"))
        .unwrap();
    assert_eq!(blocked.kind, VerdictKind::Blocked);
    assert_eq!(
        blocked.defeater.as_deref(),
        Some("incompatible {penguin, flies}")
    );
    assert!(!blocked.trace.is_empty());
    assert_eq!(defeasible(&m, "bird", &["penguin"]), VerdictKind::Entailed);
    assert!(!m.incoherent(&fs(&["penguin"])).unwrap());
    assert!(m.coherent());
}

fn nonmonotonicity() {
    let base = load(&["tweety_base.mik"]);
    let constraint = Statement::Incompatible(lits(&["penguin", "flies"]));
    let next = add_statement(&base, &constraint).unwrap();
    assert_eq!(next.revision(), base.revision() + 1);
    assert_eq!(
        defeasible(&model(&base), "flies", &["penguin"]),
        VerdictKind::DefeasiblyEntailed
    );
    assert_eq!(
        defeasible(&model(&next), "flies", &["penguin"]),
        VerdictKind::Blocked
    );
    assert_eq!(
        defeasible(&model(&base), "flies", &["penguin"]),
        VerdictKind::DefeasiblyEntailed
    );
    // the same update made by concatenating files
    let concatenated = load(&["tweety_base.mik", "updates/penguin_constraint.mik"]);
    assert_eq!(
        defeasible(&model(&concatenated), "flies", &["penguin"]),
        VerdictKind::Blocked
    );
}

fn pedro() {
    let kb = load(&["pedro.mik"]);
    let m = model(&kb);
    let q = parse_query(&SourceText::stdin("entails {donkey} |= mammal")).unwrap();
    let Query::Entails {
        premises,
        conclusion,
    } = q
    else {
        panic!("parsed {q:?}");
    };
    assert!(m.inc_entails(&premises, &conclusion).unwrap());
    let cf = m
        .supports_counterfactual(&fs(&["donkey"]), &f("mammal"))
        .unwrap();
    assert!(cf.supported);
    assert_eq!(
        cf.sentence,
        "If it had been donkey, it would have been mammal"
    );
}

fn blackberry_sets() {
    let kb = load(&["blackberry.mik"]);
    let m = model(&kb);
    assert!(m.incoherent(&fs(&["blackberry", "red", "ripe"])).unwrap());
    assert!(!m.incoherent(&fs(&["blackberry", "red"])).unwrap());
    assert!(!m.incoherent(&fs(&["blackberry", "ripe"])).unwrap());
    let cherry = load(&["cherry.mik"]);
    assert!(!model(&cherry)
        .incoherent(&fs(&["cherry", "red", "ripe"]))
        .unwrap());

    let formal = common::kb("atom p, q.");
    let m = model(&formal);
    let set = fs(&["p", "p -> q", "!q"]);
    assert!(m.incoherent(&set).unwrap());
    for mask in 0..7u32 {
        let subset: Vec<Formula> = (0..3)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| set[i].clone())
            .collect();
        assert!(!m.incoherent(&subset).unwrap(), "subset {subset:?}");
    }
}

fn modal_and_s5() {
    let kb = load(&["blackberry.mik"]);
    let m = model(&kb);
    let ctx = f("blackberry");
    let possible = m.possible(&f("red & !ripe"), Some(&ctx)).unwrap();
    let necessary = m.necessary(&f("poss(red & !ripe)"), Some(&ctx)).unwrap();
    assert!(possible.holds);
    assert_eq!(possible.holds, necessary.holds);

    let mut rng = rng(SEED ^ 5);
    let mut checked = 0;
    let mut kbs = 0;
    while kbs < 150 {
        let n = rng.gen_range(1..=8);
        let kb = random_kb(&mut rng, n);
        let m = model(&kb);
        let atoms = atom_names(n);
        kbs += 1;
        for _ in 0..4 {
            let context = formula(&mut rng, &atoms, 2);
            let worlds = m.worlds(Some(&context)).unwrap();
            if worlds.is_empty() {
                continue;
            }
            let psi = formula(&mut rng, &atoms, 2);
            let poss = Formula::possibly(psi.clone());
            let nec_poss = Formula::necessarily(poss.clone());
            let a = m.possible(&psi, Some(&context)).unwrap().holds;
            let b = m.necessary(&poss, Some(&context)).unwrap().holds;
            assert_eq!(
                a,
                b,
                "kb:\n{}context {context}, psi {psi}",
                print_kb(&kb).content
            );
            for w in worlds.iter() {
                assert_eq!(
                    m.eval(w, &poss, Some(&worlds)).unwrap(),
                    m.eval(w, &nec_poss, Some(&worlds)).unwrap()
                );
            }
            checked += 1;
        }
    }
    assert!(checked >= 100, "only {checked} satisfiable contexts");
}

fn chaining() {
    let kb = load(&["blackberry.mik"]);
    let m = model(&kb);
    let paths = chain(&m, &f("blackberry")).unwrap();
    assert_eq!(paths.len(), 1);
    assert_eq!(paths[0].len(), 2);
    assert_eq!(paths[0].end(), Some(&f("poss(!eatable)")));
    assert_eq!(paths[0].edges[0].to, f("poss(red & !ripe)").canonical());
}

fn check_oracle(kb: &KnowledgeBase, atoms: &[Atom]) -> usize {
    let m = model(kb);
    let oracle = LiteralOracle::new(kb).unwrap();
    let universe = literal_universe(atoms);
    let mut pairs = 0;
    for x in &universe {
        for q in &universe {
            let fast = m
                .inc_entails(&[Formula::from(x)], &Formula::from(q))
                .unwrap();
            let slow = oracle.entails(std::slice::from_ref(x), q);
            assert_eq!(fast, slow, "{x} |= {q} in\n{}", print_kb(kb).content);
            pairs += 1;
        }
    }
    pairs
}

fn oracle_equivalence() {
    let mut kbs = 0;
    for n in 1..=4 {
        let atoms = atom_names(n);
        let universe = literal_universe(&atoms);
        let mut constraints = Vec::new();
        for (i, a) in universe.iter().enumerate() {
            for b in &universe[i + 1..] {
                if a.atom != b.atom {
                    constraints.push(vec![a.clone(), b.clone()]);
                }
            }
        }
        check_oracle(&constraint_kb(&atoms, &[]), &atoms);
        kbs += 1;
        for (i, c) in constraints.iter().enumerate() {
            check_oracle(&constraint_kb(&atoms, std::slice::from_ref(c)), &atoms);
            kbs += 1;
            for d in &constraints[i + 1..] {
                check_oracle(&constraint_kb(&atoms, &[c.clone(), d.clone()]), &atoms);
                kbs += 1;
            }
        }
    }
    assert!(kbs > 300);

    let mut rng = rng(SEED ^ 7);
    for _ in 0..500 {
        let n = rng.gen_range(5..=6);
        let atoms = atom_names(n);
        let count = rng.gen_range(0..=5);
        let constraints: Vec<_> = (0..count)
            .map(|_| {
                let arity = rng.gen_range(2..=3);
                constraint(&mut rng, &atoms, arity)
            })
            .collect();
        check_oracle(&constraint_kb(&atoms, &constraints), &atoms);
    }
}

fn persistence() {
    let mut rng = rng(SEED ^ 8);
    let mut incoherent_cases = 0;
    for _ in 0..1200 {
        let n = rng.gen_range(1..=10);
        let atoms = atom_names(n);
        let count = if n >= 2 { rng.gen_range(0..=4) } else { 0 };
        let constraints: Vec<_> = (0..count)
            .map(|_| {
                let arity = rng.gen_range(2..=n.min(3));
                constraint(&mut rng, &atoms, arity)
            })
            .collect();
        let kb = constraint_kb(&atoms, &constraints);
        let m = model(&kb);
        let phi: Vec<Formula> = (0..rng.gen_range(1..=4))
            .map(|_| formula(&mut rng, &atoms, 2))
            .collect();
        let psi: Vec<Formula> = (0..rng.gen_range(1..=3))
            .map(|_| formula(&mut rng, &atoms, 2))
            .collect();
        if m.incoherent(&phi).unwrap() {
            incoherent_cases += 1;
            let mut both = phi.clone();
            both.extend(psi);
            assert!(m.incoherent(&both).unwrap());
        }
    }
    assert!(
        incoherent_cases > 50,
        "only {incoherent_cases} incoherent sets"
    );
}

/// The named positives in order, followed by every non-reptile.
fn subset(table: &[Example], names: &[&str]) -> Vec<Example> {
    let positives = names
        .iter()
        .map(|n| table.iter().find(|e| e.name == *n).unwrap().clone());
    positives
        .chain(table.iter().filter(|e| e.label != "reptile").cloned())
        .collect()
}

fn reptiles() {
    let table = parse_table(&fixture_text("reptiles.tbl")).unwrap();
    let necessary = |names: &[&str]| {
        let m = learn_necessary(&subset(&table, names), "reptile").unwrap();
        assert_eq!(m.training, names);
        m.necessary.into_iter().collect::<Vec<_>>()
    };
    assert_eq!(
        necessary(&["cobra", "rattlesnake"]),
        [
            "cold-blooded",
            "lays-eggs",
            "no-legs",
            "poisonous",
            "scales"
        ]
    );
    assert_eq!(
        necessary(&["cobra", "rattlesnake", "boa_constrictor"]),
        ["cold-blooded", "no-legs", "scales"]
    );
    assert_eq!(
        necessary(&["cobra", "rattlesnake", "boa_constrictor", "alligator"]),
        ["cold-blooded", "scales"]
    );
    let full = learn_necessary(&table, "reptile").unwrap();
    let c = confusion(&full, &table);
    assert_eq!(c.fn_, 0);
    assert!(c.fp >= 1);
    let salmon = table.iter().find(|e| e.name == "salmon").unwrap();
    assert!(mik_core::reason::predict(&full, &salmon.features));
}

fn weights() {
    let kb = load(&["tweety.mik"]);
    let w = weight(&model(&kb), &lit("penguin"), &lits(&["bird", "flies"])).unwrap();
    assert_eq!(w.value, Ratio::new(1, 2));
    let kb = load(&["dove.mik"]);
    let w = weight(&model(&kb), &lit("dove"), &lits(&["bird", "flies"])).unwrap();
    assert_eq!(w.value, Ratio::from_integer(1));
}

fn abduction() {
    let kb = load(&["wet_lawn.mik"]);
    let m = model(&kb);
    let both = lits(&["wet_lawn", "wet_street"]);
    let lawn = lits(&["wet_lawn"]);
    for candidates in [["rain", "sprinkler"], ["sprinkler", "rain"]] {
        let r = abduce(&m, &both, &lits(&candidates)).unwrap();
        assert_eq!(r.labels(), ["rain", "sprinkler"]);
        assert!(r.hypotheses[0].consilience > r.hypotheses[1].consilience);
        let r = abduce(&m, &lawn, &lits(&candidates)).unwrap();
        let (a, b) = (&r.hypotheses[0], &r.hypotheses[1]);
        assert_eq!(
            (a.coherent, a.consilience, a.simplicity),
            (b.coherent, b.consilience, b.simplicity)
        );
        assert_eq!(r.labels(), ["rain", "sprinkler"]);
    }

    let extended = add_statement(&kb, &Statement::Atoms(vec![Atom::new("drought")])).unwrap();
    let extended = add_statement(
        &extended,
        &Statement::Incompatible(lits(&["drought", "wet_lawn"])),
    )
    .unwrap();
    let extended = add_statement(
        &extended,
        &parse_kb(&SourceText::stdin("strict drought -> wet_street."))
            .unwrap()
            .statements[0]
            .statement,
    )
    .unwrap();
    let m = model(&extended);
    let orders = [
        ["drought", "rain", "sprinkler"],
        ["rain", "drought", "sprinkler"],
        ["sprinkler", "rain", "drought"],
    ];
    for obs in [&both, &lawn] {
        for order in &orders {
            let r = abduce(&m, obs, &lits(order)).unwrap();
            let last = r.hypotheses.last().unwrap();
            assert_eq!(last.hypothesis, lit("drought"));
            assert!(!last.coherent);
            assert!(r.hypotheses[..2].iter().all(|h| h.coherent));
        }
    }
}

fn roundtrip() {
    let mut rng = rng(SEED ^ 12);
    for _ in 0..600 {
        let n = rng.gen_range(1..=6);
        let kb = random_kb(&mut rng, n);
        let text = print_kb(&kb);
        let back = build_kb(&parse_kb(&text).unwrap()).unwrap();
        assert!(back.same_statements(&kb), "{}", text.content);
    }
    let dir = fixture_path("");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mik"))
        .collect();
    files.sort();
    assert!(files.len() >= 7);
    for path in files {
        let src = SourceText::new(
            path.display().to_string(),
            std::fs::read_to_string(&path).unwrap(),
        );
        let once = print_kb(&build_kb(&parse_kb(&src).unwrap()).unwrap());
        let twice = print_kb(&build_kb(&parse_kb(&once).unwrap()).unwrap());
        assert_eq!(once.content, twice.content, "{}", path.display());
    }
    let update = load(&["tweety_base.mik", "updates/penguin_constraint.mik"]);
    let once = print_kb(&update);
    let twice = print_kb(&build_kb(&parse_kb(&once).unwrap()).unwrap());
    assert_eq!(once.content, twice.content);
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 12] = [
        ("tweety scenario", tweety),
        ("nonmonotonicity", nonmonotonicity),
        ("pedro entailment", pedro),
        ("blackberry and formal sets", blackberry_sets),
        ("modal conditional and S5 collapse", modal_and_s5),
        ("chaining", chaining),
        ("oracle equivalence", oracle_equivalence),
        ("incoherence persistence", persistence),
        ("reptile classifier", reptiles),
        ("weights", weights),
        ("abduction", abduction),
        ("parser roundtrip", roundtrip),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        println!(
            "{} {:>2} {name} ({:.2?})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed()
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    println!(
        "{} of 12 criteria passed in {:.2?}",
        12 - failed.len(),
        start.elapsed()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
