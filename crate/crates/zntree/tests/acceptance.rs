//! Acceptance suite: one test per criterion, each printing a pass line.
//! All expected values are either definitional, frozen from independent
//! oracles computed in this file (exhaustive enumeration, graph BFS,
//! reduced-word prefix weights), or exhaustive scans with zero tolerance.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::time::Instant;

use zntree::axioms::{properness_trend, AxiomChecker};
use zntree::doc;
use zntree::lexvec::{HalfVec, LexVec};
use zntree::report::Verdict;
use zntree::splitting::{
    build_hierarchy, conjugation_iso, elliptic_kernel, stabilizer_generators, stable_letters,
};
use zntree::tree::{build_coset_tree, IsometryClass};
use zntree::{Ball, LengthFunction};

fn compile(name: &str) -> (std::sync::Arc<zntree::GroupModel>, LengthFunction) {
    doc::builtin(name)
        .unwrap_or_else(|| panic!("missing builtin {name}"))
        .compile()
        .unwrap()
}

fn ball_of(lf: &LengthFunction, r: u32) -> Ball {
    lf.model().enumerate_ball(r).unwrap()
}

fn pass(criterion: u32, name: &str) {
    println!("ACCEPTANCE {criterion} ({name}): PASS");
}

/// Criterion 1: exhaustive lex arithmetic on all vectors with coordinates
/// in [-3,3] and arity up to 3 — order totality, translation invariance,
/// height monotonicity, projection additivity. Zero violations, under 10 s.
#[test]
fn criterion_1_lex_arithmetic_exhaustive() {
    let started = Instant::now();
    for n in 1..=3usize {
        let mut vectors: Vec<LexVec> = Vec::new();
        let size = 7usize.pow(n as u32);
        for code in 0..size {
            let mut c = code;
            let coords: Vec<i128> = (0..n)
                .map(|_| {
                    let v = (c % 7) as i128 - 3;
                    c /= 7;
                    v
                })
                .collect();
            vectors.push(LexVec::new(coords));
        }
        // order totality and antisymmetry
        for x in &vectors {
            for y in &vectors {
                let xy = x.cmp(y);
                let yx = y.cmp(x);
                assert_eq!(xy, yx.reverse());
                if xy == std::cmp::Ordering::Equal {
                    assert_eq!(x, y);
                }
            }
        }
        // height monotonicity for positives
        for x in &vectors {
            for y in &vectors {
                if x.is_positive() && y.is_positive() && x.height() < y.height() {
                    assert!(x < y, "{x} vs {y}");
                }
            }
        }
        // translation invariance over all triples, via a precomputed sum
        // table (the sums are the same LexVec additions, tabulated once)
        let sums: Vec<Vec<LexVec>> = vectors
            .iter()
            .map(|x| vectors.iter().map(|z| x + z).collect())
            .collect();
        for (i, x) in vectors.iter().enumerate() {
            for (j, y) in vectors.iter().enumerate() {
                let before = x.cmp(y);
                for k in 0..vectors.len() {
                    assert_eq!(before, sums[i][k].cmp(&sums[j][k]));
                }
            }
        }
        // projection additivity and monotonicity
        for k in 0..n {
            for (i, x) in vectors.iter().enumerate() {
                for (j, y) in vectors.iter().enumerate() {
                    assert_eq!(
                        &x.project(k).unwrap() + &y.project(k).unwrap(),
                        sums[i][j].project(k).unwrap()
                    );
                }
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 1 must finish within 10 s, took {elapsed:?}"
    );
    pass(1, "lex arithmetic");
}

/// Criterion 2: the hyperbolicity defect is exactly zero for the three
/// tree-like builtins on every ball of radius up to 3, within 60 s each.
#[test]
fn criterion_2_delta_computation() {
    for (name, arity) in [("F2-wordlen", 1usize), ("W2", 2), ("Z2-lexabs", 2)] {
        let started = Instant::now();
        let (_, lf) = compile(name);
        for r in 1..=3 {
            let ball = ball_of(&lf, r);
            let checker = AxiomChecker::new(&lf, &ball).unwrap();
            let (report, delta) = checker.hyperbolicity_defect(0).unwrap();
            assert_eq!(delta, HalfVec::zero(arity), "{name} radius {r}");
            assert_eq!(report.verdict, Verdict::Pass);
        }
        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() < 60.0,
            "{name} exceeded 60 s: {elapsed:?}"
        );
    }
    pass(2, "delta computation");
}

/// Criterion 3: regularity passes with delta = 0 on the builtins at radius
/// 3 with every witness separation exactly zero; the planted-gap table
/// model fails with a replayable witness.
#[test]
fn criterion_3_regularity() {
    for name in ["F2-wordlen", "W2", "Z2-lexabs"] {
        let (_, lf) = compile(name);
        let ball = ball_of(&lf, 3);
        let checker = AxiomChecker::new(&lf, &ball).unwrap();
        let outcome = checker.regularity(&HalfVec::zero(lf.arity())).unwrap();
        assert_eq!(outcome.report.verdict, Verdict::Pass, "{name}");
        assert_eq!(
            outcome.witnesses.len(),
            ball.len() * ball.len(),
            "{name}: every pair must carry a witness"
        );
        for w in &outcome.witnesses {
            assert!(w.separation.is_zero(), "{name}: l(g_c^-1 h_c) must be 0");
            assert!(w.within_le_4delta);
        }
        assert!(outcome.non_integral.is_empty());
    }

    let (_, lf) = compile("planted-regularity-gap");
    let ball = ball_of(&lf, 2);
    let checker = AxiomChecker::new(&lf, &ball).unwrap();
    let outcome = checker.regularity(&HalfVec::zero(1)).unwrap();
    assert_eq!(outcome.report.verdict, Verdict::Fail);
    // replay each failing pair in isolation: the product value is realized
    // by no ball element, so no decomposition can exist
    for (g, h) in &outcome.failing_pairs {
        let c = lf.gromov_product(g, h).unwrap().to_lexvec().unwrap();
        assert!(ball.iter().all(|w| lf.evaluate(w).unwrap() != c));
    }
    pass(3, "regularity");
}

/// Criterion 4: the projected products c_1 satisfy the 0-hyperbolic
/// four-point inequality exactly on all radius-3 triples of W2 and
/// Z2-lexabs, and l_1(g^2) >= l_1(g) on every ball element.
#[test]
fn criterion_4_projected_zero_hyperbolicity() {
    for name in ["W2", "Z2-lexabs"] {
        let (_, lf) = compile(name);
        let ball = ball_of(&lf, 3);
        let checker = AxiomChecker::new(&lf, &ball).unwrap();
        let (_, delta) = checker.hyperbolicity_defect(1).unwrap();
        assert!(delta.is_zero(), "{name}: c_1 must be exactly 0-hyperbolic");
        for g in ball.iter() {
            let g2 = lf.model().power(g, 2).unwrap();
            let l1_g2 = lf.evaluate(&g2).unwrap().project(1).unwrap();
            let l1_g = lf.evaluate(g).unwrap().project(1).unwrap();
            assert!(l1_g2 >= l1_g, "{name}: l_1(g^2) >= l_1(g) failed");
        }
    }
    pass(4, "projected products");
}

/// Independent graph-distance oracle: BFS over the tree's edge list.
fn bfs_distance(edges: &[(usize, usize)], vertices: usize, from: usize) -> Vec<Option<u64>> {
    let mut adjacency = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut dist = vec![None; vertices];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &u in &adjacency[v] {
            if dist[u].is_none() {
                dist[u] = Some(dist[v].unwrap() + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Criterion 5: tree fidelity. W2 level 1 radius 2: exactly 9 labeled
/// vertices, 8 edges, 0 path points, and the graph distance between any
/// two labeled vertices equals the t-coordinate of d_l (36 unordered
/// pairs). Z2-lexabs level 1 radius 3: a 7-vertex line.
#[test]
fn criterion_5_tree_fidelity() {
    let (_, lf) = compile("W2");
    let ball = ball_of(&lf, 2);
    let tree = build_coset_tree(&lf, &ball, 1).unwrap();
    assert_eq!(tree.labeled_count(), 9);
    assert_eq!(tree.edges.len(), 8);
    assert_eq!(tree.path_point_count(), 0);
    let mut pairs = 0;
    for i in 0..tree.cosets.len() {
        let from = tree.node_of_coset(i);
        let oracle = bfs_distance(&tree.edges, tree.nodes.len(), from);
        for j in (i + 1)..tree.cosets.len() {
            pairs += 1;
            let to = tree.node_of_coset(j);
            let d_l = lf
                .pseudometric(&tree.cosets[i].rep, &tree.cosets[j].rep)
                .unwrap();
            assert_eq!(oracle[to].unwrap() as i128, d_l.coord(1));
            assert_eq!(tree.distance(from, to), d_l.coord(1));
        }
    }
    assert_eq!(pairs, 36);

    let (_, lf) = compile("Z2-lexabs");
    let ball = ball_of(&lf, 3);
    let tree = build_coset_tree(&lf, &ball, 1).unwrap();
    assert_eq!(tree.labeled_count(), 7);
    assert_eq!(tree.path_point_count(), 0);
    assert_eq!(tree.edges.len(), 6);
    let mut degrees = vec![0usize; tree.nodes.len()];
    for &(a, b) in &tree.edges {
        degrees[a] += 1;
        degrees[b] += 1;
    }
    assert_eq!(degrees.iter().filter(|&&d| d == 1).count(), 2);
    assert!(degrees.iter().all(|&d| d <= 2), "a line has max degree 2");
    pass(5, "tree fidelity");
}

/// Criterion 6: the brute-force isometry classification agrees with the
/// l_k(g^2)-vs-l_k(g) shortcut for every window element of W2 and
/// Z2-lexabs, and no inversion is ever reported for models that pass the
/// power-height check.
#[test]
fn criterion_6_isometry_trichotomy() {
    for name in ["W2", "Z2-lexabs"] {
        let (_, lf) = compile(name);
        let ball = ball_of(&lf, 3);
        let checker = AxiomChecker::new(&lf, &ball).unwrap();
        assert_eq!(checker.power_height(4).unwrap().verdict, Verdict::Pass);
        let tree = build_coset_tree(&lf, &ball, 1).unwrap();
        for g in ball.iter() {
            let report = tree.classify_isometry(&lf, g).unwrap();
            match &report.class {
                IsometryClass::Inversion { .. } => {
                    panic!("{name}: inversion reported for a power-height-passing model")
                }
                IsometryClass::Elliptic { .. } | IsometryClass::Hyperbolic { .. } => {
                    assert!(
                        report.consistent,
                        "{name}: brute-force class disagrees with the shortcut on {}",
                        lf.model().render_word(g)
                    );
                }
                IsometryClass::Inconclusive { .. } => {
                    panic!(
                        "{name}: window could not certify {} at radius 3",
                        lf.model().render_word(g)
                    )
                }
            }
        }
    }
    pass(6, "isometry trichotomy");
}

/// Criterion 7: splitting extraction. W2 yields one stable letter with
/// trivial associated subgroup; Z2-lexabs yields one stable letter with
/// C = D = <a> and the identity isomorphism; the extracted relations
/// re-verify by direct multiplication.
#[test]
fn criterion_7_splitting_extraction() {
    let (_, lf) = compile("W2");
    let ball = ball_of(&lf, 3);
    let tree = build_coset_tree(&lf, &ball, 1).unwrap();
    let scan = stable_letters(&lf, &ball, &tree).unwrap();
    assert_eq!(scan.letters.len(), 1);
    assert_eq!(lf.model().render_word(&scan.letters[0]), "t");
    let stab = stabilizer_generators(&lf, &ball, &scan.letters[0], 1).unwrap();
    assert_eq!(stab.members.len(), 1, "C must be trivial");
    let report = build_hierarchy("W2", &lf, 3, 4, 0).unwrap();
    assert_eq!(report.levels[0].presentation, "<a, t | >");

    let (_, lf) = compile("Z2-lexabs");
    let ball = ball_of(&lf, 3);
    let tree = build_coset_tree(&lf, &ball, 1).unwrap();
    let scan = stable_letters(&lf, &ball, &tree).unwrap();
    assert_eq!(scan.letters.len(), 1);
    let t = &scan.letters[0];
    assert_eq!(lf.model().render_word(t), "t");
    let stab = stabilizer_generators(&lf, &ball, t, 1).unwrap();
    // C = <a> within the window: 1 and a^{±1..3}
    assert_eq!(stab.members.len(), 7);
    let model = lf.model();
    let t_inv = model.invert(t).unwrap();
    for c in &stab.members {
        let image = conjugation_iso(&lf, t, c, 1).unwrap();
        assert_eq!(image, *c, "phi must be the identity on <a>");
        // re-verify the relation t^-1 c t = phi(c) by direct multiplication
        let direct = model
            .multiply(&model.multiply(&t_inv, c).unwrap(), t)
            .unwrap();
        assert_eq!(direct, image);
    }
    // D within the window equals C
    let report = build_hierarchy("Z2-lexabs", &lf, 3, 4, 0).unwrap();
    let letter = &report.levels[0].letters[0];
    assert_eq!(letter.c_members, letter.d_members_window);
    assert!(letter.relations_reverified);
    assert_eq!(report.levels[0].presentation, "<a, t | t^-1 a t = a>");

    // the W2 relation list is empty, so its only relation check is that the
    // letter itself was reproduced; re-verify the Z2 relation once more from
    // scratch on a fresh compile
    let (model2, lf2) = compile("Z2-lexabs");
    let a = model2.parse_word("a").unwrap();
    let t2 = model2.parse_word("t").unwrap();
    let lhs = model2
        .multiply(
            &model2.multiply(&model2.invert(&t2).unwrap(), &a).unwrap(),
            &t2,
        )
        .unwrap();
    assert_eq!(lhs, a);
    let _ = lf2;
    pass(7, "splitting extraction");
}

/// Criterion 8: on the Z2-lexabs associated subgroup the translation lift
/// vanishes identically, the elliptic kernel is everything, the quotient
/// rank is 0 <= k-1, and the colinearity identity holds for all window
/// elements.
#[test]
fn criterion_8_translation_lift_homomorphism() {
    let (_, lf) = compile("Z2-lexabs");
    let ball = ball_of(&lf, 3);
    let t = lf.model().parse_word("t").unwrap();
    let stab = stabilizer_generators(&lf, &ball, &t, 1).unwrap();
    for c in &stab.members {
        assert!(lf.hyp_translation(c, 1).unwrap().is_zero());
    }
    // additivity (trivially, everything is zero) on all pairs
    for c1 in &stab.members {
        for c2 in &stab.members {
            let prod = lf.model().multiply(c1, c2).unwrap();
            let lhs = lf.hyp_translation(&prod, 1).unwrap();
            let rhs = &lf.hyp_translation(c1, 1).unwrap() + &lf.hyp_translation(c2, 1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    let kernel = elliptic_kernel(&lf, &stab.members, &stab.generators).unwrap();
    assert_eq!(kernel.members, stab.members, "E = C");
    let rank = zntree::splitting::abelian_rank(&lf, &stab.generators, 1).unwrap();
    assert_eq!(rank.rank, 0);
    assert!(rank.within_bound, "rank 0 <= k-1 = 0");
    // colinearity for every window element of C
    for c in &stab.members {
        if c.is_identity() {
            continue;
        }
        let c_inv = lf.model().invert(c).unwrap();
        let lhs: HalfVec = lf.evaluate(c).unwrap().project(1).unwrap().into();
        let c_cc = lf.projected_product(c, &c_inv, 1).unwrap();
        let r1 = &lf.projected_product(c, &t, 1).unwrap() + &c_cc;
        let r2 = &lf.projected_product(&c_inv, &t, 1).unwrap() + &c_cc;
        assert!(lhs == r1 || lhs == r2);
    }
    pass(8, "translation lift homomorphism");
}

/// Criterion 9: power-height, isolation, and positivity pass for W2 and
/// Z2-lexabs; every planted-violation document exits 1 from the CLI with a
/// witness that re-evaluates to a violation in isolation.
#[test]
fn criterion_9_condition_checks() {
    for name in ["W2", "Z2-lexabs"] {
        let (_, lf) = compile(name);
        let ball = ball_of(&lf, 3);
        let checker = AxiomChecker::new(&lf, &ball).unwrap();
        assert_eq!(checker.power_height(4).unwrap().verdict, Verdict::Pass);
        assert_eq!(checker.isolated_level(1, 4).unwrap().verdict, Verdict::Pass);
        assert_eq!(checker.positivity().unwrap().verdict, Verdict::Pass);
    }

    let planted = [
        "planted-negative-length",
        "planted-zero-length",
        "planted-regularity-gap",
        "planted-power-height",
        "planted-isolation",
        "planted-conjugation",
    ];
    for name in planted {
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_zntree"))
            .args([
                "check",
                "--model",
                &format!("builtin:{name}"),
                "--radius",
                "3",
                "--format",
                "json",
            ])
            .output()
            .unwrap();
        assert_eq!(
            output.status.code(),
            Some(1),
            "{name} must exit 1: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let run: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        let checks = run["checks"].as_array().unwrap();
        let failing: Vec<&serde_json::Value> =
            checks.iter().filter(|c| c["verdict"] == "fail").collect();
        assert!(!failing.is_empty(), "{name}");
        assert!(
            failing
                .iter()
                .any(|c| !c["witnesses"].as_array().unwrap().is_empty()),
            "{name}: a failing check must carry a witness"
        );
        // replay one witness in isolation
        replay_witness(name, &failing);
    }
    pass(9, "condition checks");
}

fn replay_witness(name: &str, failing: &[&serde_json::Value]) {
    let (_, lf) = compile(name);
    let model = lf.model().clone();
    let first = failing
        .iter()
        .find(|c| !c["witnesses"].as_array().unwrap().is_empty())
        .unwrap();
    let check = first["check"].as_str().unwrap();
    let witness = &first["witnesses"][0];
    let elements: Vec<zntree::Word> = witness["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| model.parse_word(e.as_str().unwrap()).unwrap())
        .collect();
    match check {
        "length-axioms" => {
            // the planted negative length violates L1 directly
            let l = lf.evaluate(&elements[0]).unwrap();
            assert!(
                l < LexVec::zeros(lf.arity()) || {
                    let inv = model.invert(&elements[0]).unwrap();
                    lf.evaluate(&inv).unwrap() != l
                }
            );
        }
        "positivity" => {
            assert!(!elements[0].is_identity());
            assert!(lf.evaluate(&elements[0]).unwrap().is_zero());
        }
        "regularity" => {
            // independent single-pair replay: search the ball for a valid
            // common-beginning pair under the same bound the check used
            let ball = ball_of(&lf, 3);
            let checker = AxiomChecker::new(&lf, &ball).unwrap();
            let (_, delta) = checker.hyperbolicity_defect(0).unwrap();
            let four_delta = delta.double().scalar_mul(2);
            let (g, h) = (&elements[0], &elements[1]);
            let c_int = lf
                .gromov_product(g, h)
                .unwrap()
                .to_lexvec()
                .expect("failing pairs have integral products");
            let mut found = false;
            for gc in ball.iter() {
                if lf.evaluate(gc).unwrap() != c_int {
                    continue;
                }
                let gd = model.multiply(&model.invert(gc).unwrap(), g).unwrap();
                if &c_int + &lf.evaluate(&gd).unwrap() != lf.evaluate(g).unwrap() {
                    continue;
                }
                for hc in ball.iter() {
                    if lf.evaluate(hc).unwrap() != c_int {
                        continue;
                    }
                    let hd = model.multiply(&model.invert(hc).unwrap(), h).unwrap();
                    if &c_int + &lf.evaluate(&hd).unwrap() != lf.evaluate(h).unwrap() {
                        continue;
                    }
                    if lf.pseudometric(gc, hc).unwrap() <= four_delta {
                        found = true;
                    }
                }
            }
            assert!(!found, "{name}: the witness pair must still fail on replay");
        }
        "power-height" => {
            let g = &elements[0];
            let exp: i64 = witness["values"]
                .as_array()
                .unwrap()
                .iter()
                .find(|v| v[0] == "exponent")
                .map(|v| v[1].as_str().unwrap().parse().unwrap())
                .unwrap();
            let ge = model.power(g, exp).unwrap();
            let (lg, le) = (lf.evaluate(g).unwrap(), lf.evaluate(&ge).unwrap());
            assert!(le < lg);
            assert_ne!((&lg - &le).height().0, 1);
        }
        other if other.starts_with("isolated-level") => {
            let g = &elements[0];
            let exp: i64 = witness["values"]
                .as_array()
                .unwrap()
                .iter()
                .find(|v| v[0] == "exponent")
                .map(|v| v[1].as_str().unwrap().parse().unwrap())
                .unwrap();
            let ge = model.power(g, exp).unwrap();
            assert!(lf.evaluate(&ge).unwrap().height().0 <= 1);
            assert!(lf.evaluate(g).unwrap().height().0 > 1);
        }
        other => panic!("unexpected failing check {other} for {name}"),
    }
}

/// Criterion 10: properness discrimination. S_k stabilizes for W2; across
/// the uniform-weight truncations the bounded sets grow strictly and the
/// family verdict is inconclusive.
#[test]
fn criterion_10_properness_discrimination() {
    let (_, lf) = compile("W2");
    let ball = ball_of(&lf, 3);
    let checker = AxiomChecker::new(&lf, &ball).unwrap();
    let report = checker.properness(2).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    // S_2 stabilizes at {1, a^{±1}, a^{±2}}
    let last: Vec<u64> = report
        .stats
        .iter()
        .filter(|(k, _)| k.starts_with("S_k_radius_"))
        .map(|(_, v)| *v)
        .collect();
    assert_eq!(last[2], 5);
    assert_eq!(last[3], 5);

    let compiled: Vec<_> = doc::uniform_family()
        .into_iter()
        .map(|(label, d)| (label, d.compile().unwrap().1))
        .collect();
    let entries: Vec<(String, &LengthFunction)> = compiled
        .iter()
        .map(|(label, lf)| (label.clone(), lf))
        .collect();
    let trend = properness_trend(&entries, 2, 1).unwrap();
    assert_eq!(trend.verdict, Verdict::Inconclusive);
    let sizes: Vec<u64> = trend
        .stats
        .iter()
        .filter(|(k, _)| k.starts_with("S_k["))
        .map(|(_, v)| *v)
        .collect();
    assert_eq!(sizes, vec![5, 9, 17], "|S_1| = 2m+1 grows with the rank");
    pass(10, "properness discrimination");
}

/// Criterion 11: two runs of the hierarchy command on any builtin produce
/// byte-identical reports, in both text and JSON form.
#[test]
fn criterion_11_determinism() {
    for name in ["W2", "Z2-lexabs", "F2-wordlen"] {
        for format in ["text", "json"] {
            let run = || {
                std::process::Command::new(env!("CARGO_BIN_EXE_zntree"))
                    .args([
                        "hierarchy",
                        "--model",
                        &format!("builtin:{name}"),
                        "--radius",
                        "3",
                        "--format",
                        format,
                    ])
                    .output()
                    .unwrap()
            };
            let first = run();
            let second = run();
            assert_eq!(first.status.code(), Some(0), "{name}");
            assert_eq!(
                first.stdout, second.stdout,
                "{name}/{format}: reports must be byte-identical"
            );
            assert!(!first.stdout.is_empty());
        }
    }
    pass(11, "determinism");
}

/// Ball enumeration oracle cross-checks used elsewhere in the suite: the
/// exhaustive letter-product enumeration agrees with the library.
#[test]
fn enumeration_oracle_agrees_with_library_balls() {
    // independent brute force for the free group of rank 2: all reduced
    // words over {a, A, b, B} of length <= 2
    let letters = ["a", "A", "b", "B"];
    let inverse = |x: &str| match x {
        "a" => "A",
        "A" => "a",
        "b" => "B",
        _ => "b",
    };
    let mut words: HashSet<String> = HashSet::new();
    words.insert(String::new());
    let mut frontier: Vec<Vec<&str>> = vec![vec![]];
    for _ in 0..2 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in letters {
                if w.last().map(|x| inverse(x) == l).unwrap_or(false) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(l);
                if words.insert(nw.join("")) {
                    next.push(nw);
                }
            }
        }
        frontier = next;
    }
    assert_eq!(words.len(), 17);
    let (model, _) = compile("F2-wordlen");
    assert_eq!(model.enumerate_ball(2).unwrap().len(), 17);

    // lattice-point oracle for the free abelian plane
    let mut pts = BTreeSet::new();
    for m in -2i32..=2 {
        for n in -2i32..=2 {
            if m.abs() + n.abs() <= 2 {
                pts.insert((m, n));
            }
        }
    }
    assert_eq!(pts.len(), 13);
    let (model, _) = compile("Z2-lexabs");
    assert_eq!(model.enumerate_ball(2).unwrap().len(), 13);

    // partition oracle for W2 at radius 2: strip trailing a-powers
    let (model, lf) = compile("W2");
    let ball = model.enumerate_ball(2).unwrap();
    let mut classes: HashMap<String, usize> = HashMap::new();
    for w in ball.iter() {
        let mut letters = w.letters().to_vec();
        while letters.last().map(|l| l.gen == 0).unwrap_or(false) {
            letters.pop();
        }
        let key = model.render_word(&zntree::Word::from_letters(letters));
        *classes.entry(key).or_default() += 1;
    }
    assert_eq!(classes.len(), 9);
    let cosets = zntree::tree::coset_partition(&lf, &ball, 1).unwrap();
    assert_eq!(cosets.len(), 9);
    for c in &cosets {
        let key = model.render_word(&c.rep);
        assert_eq!(classes[&key], c.members.len());
    }
}
