//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, even when all pass.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use regreal::automata::{
    determinize, equivalent, parse_dfa, parse_nfa, regex_to_nfa_over, Alphabet, Dfa,
};
use regreal::classify::{classify, decompose, Classification};
use regreal::cover::{cover, verify_cover};
use regreal::rr::{
    reachability_gadget, reduce_rr, solve_rr, solve_rr_bounded, solve_rr_nfa, Digraph,
};
use regreal::transducer::{compose_dfst, image_nfa, parse_dfst, preimage_automaton};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took <= limit, || {
        format!("took {took:.1?}, limit {limit:?}")
    })?;
    Ok(took)
}

fn regex_dfa(p: &str) -> Dfa {
    determinize(&regex_to_nfa_over(p, &ab()).unwrap())
}

fn dichotomy_corpus() -> Vec<Dfa> {
    let mut corpus = all_trim_dfas(3);
    let mut r = rng(1);
    for _ in 0..500 {
        let n = r.gen_range(4..=6);
        corpus.push(random_dfa(&mut r, n, &ab(), 0.8));
    }
    corpus
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let corpus = dichotomy_corpus();
    let (mut hard, mut easy) = (0, 0);
    for d in &corpus {
        let c = classify(d).map_err(|e| format!("classify failed on\n{d}: {e}"))?;
        c.verify(d)
            .map_err(|e| format!("certificate rejected on\n{d}: {e}"))?;
        if c.is_hard() {
            hard += 1;
        } else {
            easy += 1;
        }
    }
    let took = within(Duration::from_secs(300), start)?;
    Ok(format!(
        "{} machines, {hard} hard / {easy} easy, all certificates verified in {took:.1?}",
        corpus.len()
    ))
}

fn criterion_2() -> Outcome {
    let corpus = all_trim_dfas(3);
    for d in &corpus {
        let verdict = classify(d).map_err(|e| e.to_string())?.is_hard();
        let oracle = brute_force_hard(d);
        ensure(verdict == oracle, || {
            format!("classify says hard={verdict}, brute force says {oracle} on\n{d}")
        })?;
    }
    Ok(format!("{} machines agree with brute force", corpus.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let sigma_star = Dfa::universal(ab());
    let mut checked = 0;
    let mut check = |f: &Dfa, target: &Dfa| -> Result<(), String> {
        let t = cover(f, target).map_err(|e| format!("cover failed: {e}\n{f}\n{target}"))?;
        let v = verify_cover(&t, f, target).map_err(|e| e.to_string())?;
        ensure(v.holds(), || format!("image differs: {:?}", v.separation))?;
        checked += 1;
        Ok(())
    };
    for _ in 0..20 {
        let n = r.gen_range(1..=4);
        let target = random_dfa(&mut r, n, &ab(), 0.8);
        check(&sigma_star, &target)?;
    }
    let mut filters = 0;
    while filters < 10 {
        let n = r.gen_range(2..=4);
        let f = random_dfa(&mut r, n, &ab(), 0.9);
        if !classify(&f).map_err(|e| e.to_string())?.is_hard() {
            continue;
        }
        filters += 1;
        for _ in 0..5 {
            let n = r.gen_range(1..=4);
            let target = random_dfa(&mut r, n, &ab(), 0.8);
            check(&f, &target)?;
        }
    }
    let took = within(Duration::from_secs(120), start)?;
    Ok(format!("{checked} covers verified in {took:.1?}"))
}

fn criterion_4() -> Outcome {
    let inputs = all_trim_dfas(3);
    let mut yes = 0;
    let mut total = 0;
    for pattern in ["a*b*", "(ab)*", "a*ba*"] {
        let filter = regex_dfa(pattern);
        let exprs = decompose(&filter).map_err(|e| e.to_string())?;
        for a in &inputs {
            let counted = solve_rr_bounded(&exprs, a).map_err(|e| e.to_string())?;
            let product = solve_rr(&filter, a);
            ensure(counted.is_some() == product.is_some(), || {
                format!("{pattern}: counter={counted:?} product={product:?} on\n{a}")
            })?;
            for w in counted.iter().map(|s| &s.word).chain(product.iter()) {
                ensure(dfa_accepts(&filter, w) && dfa_accepts(a, w), || {
                    format!("{pattern}: witness {w} fails on\n{a}")
                })?;
            }
            if let Some(s) = &counted {
                ensure(exprs[s.expr].instantiate(&s.exponents) == s.word, || {
                    "witness does not match its exponents".to_string()
                })?;
                yes += 1;
            }
            total += 1;
        }
    }
    Ok(format!("{total} instances agree ({yes} yes)"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut nonempty = 0;
    for _ in 0..100 {
        let n = r.gen_range(1..=3);
        let f2 = random_dfa(&mut r, n, &ab(), 0.8);
        let n = r.gen_range(1..=3);
        let t = random_dfst(&mut r, n, &ab(), &ab(), 2);
        let n = r.gen_range(1..=4);
        let a = random_dfa(&mut r, n, &ab(), 0.8);
        let direct = solve_rr_nfa(&image_nfa(&t, &f2).map_err(|e| e.to_string())?, &a.to_nfa());
        let reduced = reduce_rr(&t, &a).map_err(|e| e.to_string())?;
        let via = solve_rr(&f2, &reduced);
        ensure(direct.is_some() == via.is_some(), || {
            format!("direct={direct:?} reduced={via:?}\n{f2}\n{t}\n{a}")
        })?;
        if let Some(x) = &via {
            let y = dfst_apply(&t, x);
            ensure(y.as_ref().is_some_and(|y| dfa_accepts(&a, y)), || {
                format!("reduced witness {x} does not map into L(a)")
            })?;
        }
        nonempty += usize::from(direct.is_some());
    }
    Ok(format!("100 triples agree ({nonempty} non-empty)"))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut reachable = 0;
    for _ in 0..100 {
        let nodes = r.gen_range(1..=20);
        let mut edges = Vec::new();
        for u in 0..nodes {
            for v in 0..nodes {
                if u != v && r.gen_bool(0.2) {
                    edges.push((u, v));
                }
            }
        }
        let (s, t) = (r.gen_range(0..nodes), r.gen_range(0..nodes));
        let g = Digraph::new(nodes, edges.clone(), s, t).map_err(|e| e.to_string())?;
        let w = random_word(&mut r, &ab(), 4);
        let gadget = reachability_gadget(&g, &w, &ab()).map_err(|e| e.to_string())?;
        let oracle = bfs_reachable(nodes, &edges, s, t);
        let single = regex_to_nfa_over(&w.iter().collect::<String>(), &ab()).unwrap();
        for filter in [single, Dfa::universal(ab()).to_nfa()] {
            let answer = solve_rr_nfa(&filter, &gadget);
            ensure(answer.is_some() == oracle, || {
                format!("reachable={oracle} but solver said {answer:?}\n{g}")
            })?;
        }
        reachable += usize::from(oracle);
    }
    Ok(format!("100 graphs agree ({reachable} reachable)"))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let words = words_upto(&ab(), 5);
    let mut checks = 0;
    for _ in 0..50 {
        let n = r.gen_range(1..=3);
        let t1 = random_dfst(&mut r, n, &ab(), &ab(), 2);
        let n = r.gen_range(1..=3);
        let t2 = random_dfst(&mut r, n, &ab(), &ab(), 2);
        let n = r.gen_range(1..=3);
        let a = random_dfa(&mut r, n, &ab(), 0.8);
        let composed = compose_dfst(&t1, &t2).map_err(|e| e.to_string())?;
        let pre = preimage_automaton(&t1, &a).map_err(|e| e.to_string())?;
        let img = image_nfa(&t1, &a).map_err(|e| e.to_string())?;
        for x in &words {
            let expect = dfst_apply(&t1, x).and_then(|y| dfst_apply(&t2, &y));
            let got = composed.apply(x).map_err(|e| e.to_string())?;
            ensure(got == expect, || {
                format!("compose on {x}: {got:?} vs {expect:?}")
            })?;
            let in_pre = dfst_apply(&t1, x).is_some_and(|y| dfa_accepts(&a, &y));
            ensure(nfa_accepts(&pre, x) == in_pre, || {
                format!("preimage on {x}")
            })?;
            ensure(nfa_accepts(&img, x) == in_image(&t1, &a, x), || {
                format!("image on {x}\n{t1}\n{a}")
            })?;
            checks += 3;
        }
    }
    Ok(format!("{checks} word-level checks over 50 combinations"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_regreal"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn deterministic(args: &[&str], artifact: Option<&Path>) -> Result<(String, String), String> {
    let mut seen: Option<(String, String)> = None;
    for _ in 0..2 {
        let (code, stdout) = cli(args);
        ensure(code == 0, || format!("{args:?} exited {code}"))?;
        let file = artifact
            .map(|p| std::fs::read_to_string(p).unwrap())
            .unwrap_or_default();
        if let Some(prev) = &seen {
            ensure(*prev == (stdout.clone(), file.clone()), || {
                format!("{args:?} is not byte-identical across runs")
            })?;
        }
        seen = Some((stdout, file));
    }
    Ok(seen.unwrap())
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name);
    let write = |name: &str, text: &str| std::fs::write(path(name), text).unwrap();
    let p = |name: &str| path(name).to_string_lossy().into_owned();

    let mut r = rng(8);
    let filter = random_dfa(&mut r, 3, &ab(), 0.9);
    write("filter.dfa", &filter.to_string());
    let target = regex_dfa("a(ba)*|b");
    write("target.dfa", &target.to_string());
    let t1 = random_dfst(&mut r, 3, &ab(), &ab(), 2);
    let t2 = random_dfst(&mut r, 2, &ab(), &ab(), 2);
    write("t1.dfst", &t1.to_string());
    write("t2.dfst", &t2.to_string());
    write(
        "graph.txt",
        "graph\nnodes 3\nsource 0\ntarget 2\nedge 0 1\nedge 1 2\n",
    );
    let mut artifacts = 0;

    for f in [p("filter.dfa"), p("target.dfa")] {
        let (out, _) = deterministic(&["classify", &f], None)?;
        let body = out.split_once('\n').map(|x| x.1).unwrap_or("");
        let cert = Classification::parse(body).map_err(|e| e.to_string())?;
        let d = parse_dfa(&std::fs::read_to_string(&f).unwrap()).unwrap();
        cert.verify(&d)
            .map_err(|e| format!("reparsed certificate: {e}"))?;
        artifacts += 1;
    }

    let hard = Dfa::universal(ab());
    write("hard.dfa", &hard.to_string());
    let cover_out = path("cover.dfst");
    let (out, _) = deterministic(
        &[
            "cover",
            &p("hard.dfa"),
            &p("target.dfa"),
            "--out",
            &p("cover.dfst"),
        ],
        Some(&cover_out),
    )?;
    ensure(out == "VERIFIED image == target\n", || out.clone())?;
    let t = parse_dfst(&std::fs::read_to_string(&cover_out).unwrap()).map_err(|e| e.to_string())?;
    ensure(
        verify_cover(&t, &hard, &target)
            .map_err(|e| e.to_string())?
            .holds(),
        || "reloaded cover fails verification".to_string(),
    )?;
    artifacts += 1;

    let (out, _) = deterministic(&["reduce", &p("t1.dfst"), &p("target.dfa")], None)?;
    let reduced = parse_dfa(&out).map_err(|e| e.to_string())?;
    let expected = preimage_automaton(&t1, &target).unwrap();
    ensure(equivalent(&reduced.to_nfa(), &expected), || {
        "reduce round-trip".into()
    })?;
    artifacts += 1;

    let (out, _) = deterministic(&["compose", &p("t1.dfst"), &p("t2.dfst")], None)?;
    let composed = parse_dfst(&out).map_err(|e| e.to_string())?;
    let direct = compose_dfst(&t1, &t2).unwrap();
    for x in words_upto(&ab(), 5) {
        ensure(
            composed.apply(&x).unwrap() == direct.apply(&x).unwrap(),
            || format!("compose round-trip differs on {x}"),
        )?;
    }
    artifacts += 1;

    let (out, _) = deterministic(&["image", &p("t1.dfst"), &p("filter.dfa")], None)?;
    let img = parse_nfa(&out).map_err(|e| e.to_string())?;
    ensure(equivalent(&img, &image_nfa(&t1, &filter).unwrap()), || {
        "image round-trip".into()
    })?;
    artifacts += 1;

    let (out, _) = deterministic(&["gadget", &p("graph.txt"), "--word", "ab"], None)?;
    let gadget = parse_nfa(&out).map_err(|e| e.to_string())?;
    ensure(gadget.num_states() == 5, || {
        format!("gadget has {} states", gadget.num_states())
    })?;
    ensure(equivalent(&gadget, &regex_dfa("ab").to_nfa()), || {
        "gadget language".into()
    })?;
    artifacts += 1;

    let (out, _) = deterministic(&["solve", "--regex", "(ab)*", "a(a|b)*"], None)?;
    ensure(out == "YES ab\n", || out.clone())?;
    let (out, _) = deterministic(&["equiv", &p("target.dfa"), &p("target.dfa")], None)?;
    ensure(out == "EQUIVALENT\n", || out.clone())?;

    ensure(
        cli(&["reduce", &p("t1.dfst"), &p("graph.txt")]).0 == 2,
        || "parse error should exit 2".into(),
    )?;
    let c_only = Dfa::universal(Alphabet::new(['c']).unwrap());
    write("c.dfa", &c_only.to_string());
    ensure(cli(&["reduce", &p("t1.dfst"), &p("c.dfa")]).0 == 4, || {
        "alphabet mismatch should exit 4".into()
    })?;
    ensure(cli(&["cover", "--regex", "a*", "a"]).0 == 3, || {
        "easy filter should exit 3".into()
    })?;
    Ok(format!(
        "{artifacts} artifacts re-parsed equivalently, all outputs stable"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("dichotomy certificates", criterion_1),
        ("classifier completeness", criterion_2),
        ("covering", criterion_3),
        ("counter solver", criterion_4),
        ("reduction soundness", criterion_5),
        ("reachability gadget", criterion_6),
        ("transducer algebra", criterion_7),
        ("cli round-trip and determinism", criterion_8),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {} ({name})", i + 1);
        if filter.as_ref().is_some_and(|f| !label.contains(f.as_str())) {
            continue;
        }
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("{label}: PASS - {detail}"),
            Err(why) => {
                failed += 1;
                println!("{label}: FAIL - {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
