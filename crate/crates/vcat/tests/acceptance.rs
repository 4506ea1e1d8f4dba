//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vcat::coalgebra::{beh_metric_words, bisimilarity, kernel, Partition};
use vcat::extension::{
    hausdorff, kantorovich_lift, lan_extend, matching_metric, power_by_two, unit_iso_check, vcatify_wpb, ConstantOne,
    Discrete, DiscreteKantorovich, PredicateLifting, VValuedFunctor,
};
use vcat::generate::{all_spaces, random_machine, random_space};
use vcat::quantale::Monoid;
use vcat::{io, QElem, Quantale, RelPresheaf, Relation, SetFunctor, Term, VCat};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture_spaces() -> Vec<(String, VCat)> {
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    for p in paths {
        if let Ok(x) = io::load_space(&p) {
            if x.validate().all_pass() {
                out.push((p.file_name().unwrap().to_string_lossy().into_owned(), x));
            }
        }
    }
    out
}

fn chain3() -> [Arc<Quantale>; 2] {
    [Arc::new(Quantale::chain(3, 1).unwrap()), Arc::new(Quantale::chain(3, 2).unwrap())]
}

fn describe(x: &VCat) -> String {
    let q = x.quantale();
    let rows: Vec<String> = x
        .matrix()
        .iter()
        .map(|row| row.iter().map(|&r| q.format_elem(r)).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}] over {}", rows.join("; "), q.kind())
}

fn matrices_close(a: &VCat, b: &VCat) -> bool {
    a.len() == b.len() && a.same_distances(b)
}

fn criterion_1() -> Check {
    let monoid = Monoid {
        names: vec!["e".into(), "g".into()],
        op: vec![vec![0, 1], vec![1, 0]],
        unit: 0,
    };
    let free = Quantale::free_commutative_monoid(monoid).map_err(|e| e.to_string())?;
    ensure(free.size() == Some(4), || "free quantale should have 4 elements".into())?;
    let finite = [Quantale::boolean(), Quantale::chain(3, 1).unwrap(), Quantale::chain(3, 2).unwrap(), free];
    let mut checked = 0;
    for q in &finite {
        let rep = q.check_laws();
        ensure(rep.all_pass(), || format!("{}:\n{rep}", q.kind()))?;
        checked += rep.entries.iter().map(|e| e.checked).sum::<usize>();
    }
    for q in [Quantale::lawvere(), Quantale::ultrametric()] {
        let rep = q.check_laws_sampled(10_000, 0x5eed);
        ensure(rep.all_pass(), || format!("{}:\n{rep}", q.kind()))?;
        checked += rep.entries.iter().map(|e| e.checked).sum::<usize>();
    }
    Ok(format!("6 quantales, {checked} law instances"))
}

fn criterion_2() -> Check {
    let mut rng = StdRng::seed_from_u64(2);
    let mut count = 0;
    let quantales = [Arc::new(Quantale::boolean()), chain3()[0].clone(), chain3()[1].clone(), Arc::new(Quantale::lawvere())];
    for q in &quantales {
        let d = Discrete::identity(q.clone());
        for i in 0..100 {
            let x = random_space(q, 1 + i % 5, &mut rng);
            let ext = lan_extend(&d, &x).map_err(|e| e.to_string())?;
            ensure(ext.objects() == x.objects() && matrices_close(&ext, &x), || {
                format!("{} became {}", describe(&x), describe(&ext))
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} random spaces"))
}

fn criterion_3_functors() -> Vec<SetFunctor> {
    vec![
        SetFunctor::Powerset,
        SetFunctor::Multiset(3),
        SetFunctor::Power(2),
        SetFunctor::Const(vec!["p".into(), "q".into()]),
        SetFunctor::Identity,
    ]
}

fn zigzag_matches_lifting(t: &SetFunctor, x: &VCat) -> Result<(), String> {
    let zigzag = lan_extend(&Discrete::new(x.quantale().clone(), t.clone()), x).map_err(|e| e.to_string())?;
    let lifted = vcatify_wpb(t, x).map_err(|e| e.to_string())?;
    ensure(zigzag.same_as(&lifted), || format!("{t} on {}: zig-zag and relation lifting differ", describe(x)))
}

fn criterion_3() -> Check {
    let mut spaces = 0;
    let functors = criterion_3_functors();
    let [c1, c2] = chain3();
    for q in [Arc::new(Quantale::boolean()), c1, c2] {
        for n in 0..=4 {
            for x in all_spaces(&q, n) {
                for t in &functors {
                    zigzag_matches_lifting(t, &x)?;
                }
                spaces += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(3);
    let lawvere = Arc::new(Quantale::lawvere());
    for i in 0..50 {
        let x = random_space(&lawvere, 1 + i % 4, &mut rng);
        for t in &functors {
            zigzag_matches_lifting(t, &x)?;
        }
        spaces += 1;
    }
    Ok(format!("{spaces} spaces x {} functors", functors.len()))
}

fn set_of(t: &Term) -> Vec<usize> {
    match t {
        Term::Set(items) | Term::Bag(items) => items
            .iter()
            .map(|i| match i {
                Term::Atom(a) => *a,
                _ => unreachable!(),
            })
            .collect(),
        _ => unreachable!(),
    }
}

const EGLI_MILNER: [&str; 8] =
    ["10000000", "01111111", "00100000", "00110011", "00001000", "00001111", "00000010", "00000011"];

fn criterion_4() -> Check {
    let mut spaces: Vec<VCat> = fixture_spaces()
        .into_iter()
        .map(|(_, x)| x)
        .filter(|x| x.quantale().structure_flags().completely_distributive && !x.quantale().is_finite() || **x.quantale() == Quantale::boolean())
        .collect();
    let boolean = Arc::new(Quantale::boolean());
    for n in 0..=3 {
        spaces.extend(all_spaces(&boolean, n));
    }
    let mut rng = StdRng::seed_from_u64(4);
    for q in [Quantale::ultrametric(), Quantale::lawvere()] {
        let q = Arc::new(q);
        for i in 0..20 {
            spaces.push(random_space(&q, 1 + i % 4, &mut rng));
        }
    }
    let mut pairs = 0;
    for x in &spaces {
        let lifted = vcatify_wpb(&SetFunctor::Powerset, x).map_err(|e| e.to_string())?;
        let carrier = SetFunctor::Powerset.apply_on_set(x.len()).unwrap();
        for (i, a) in carrier.terms.iter().enumerate() {
            for (j, b) in carrier.terms.iter().enumerate() {
                let h = hausdorff(x, &set_of(a), &set_of(b)).map_err(|e| e.to_string())?;
                ensure(x.quantale().equal(h, lifted.d(i, j)), || format!("subsets {i}, {j} of {}", describe(x)))?;
                pairs += 1;
            }
        }
    }
    let poset = io::load_space(&fixtures_dir().join("boolean_poset.json")).map_err(|e| e.to_string())?;
    let q = poset.quantale().clone();
    for (i, row) in EGLI_MILNER.iter().enumerate() {
        for (j, bit) in row.chars().enumerate() {
            let expect = if bit == '1' { q.top() } else { q.bottom() };
            let got = hausdorff(&poset, &set_of(&SetFunctor::Powerset.apply_on_set(3).unwrap().terms[i]), &set_of(&SetFunctor::Powerset.apply_on_set(3).unwrap().terms[j]))
                .map_err(|e| e.to_string())?;
            ensure(got == expect, || format!("Egli-Milner entry ({i}, {j})"))?;
        }
    }
    Ok(format!("{} spaces, {pairs} subset pairs, 64 Egli-Milner entries", spaces.len()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn criterion_5() -> Check {
    let lawvere = Arc::new(Quantale::lawvere());
    let mut spaces = vec![io::load_space(&fixtures_dir().join("lawvere_line.json")).map_err(|e| e.to_string())?];
    let mut rng = StdRng::seed_from_u64(5);
    spaces.extend((0..10).map(|_| random_space(&lawvere, 3, &mut rng)));
    let bags: Vec<Vec<usize>> = SetFunctor::Multiset(3).apply_on_set(3).unwrap().terms.iter().map(set_of).collect();
    let mut pairs = 0;
    for x in &spaces {
        for a in &bags {
            for b in &bags {
                let got = matching_metric(x, a, b).map_err(|e| e.to_string())?;
                let expect = if a.len() != b.len() {
                    QElem::Real(f64::INFINITY)
                } else {
                    QElem::Real(
                        permutations(a.len())
                            .iter()
                            .map(|p| p.iter().enumerate().map(|(i, &j)| x.d(a[i], b[j]).as_real().unwrap()).fold(0.0, f64::max))
                            .fold(f64::INFINITY, f64::min),
                    )
                };
                ensure(lawvere.equal(got, expect), || format!("{a:?} vs {b:?} on {}", describe(x)))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} spaces, {pairs} multiset pairs", spaces.len()))
}

fn criterion_6() -> Check {
    let integral = [
        Arc::new(Quantale::boolean()),
        Arc::new(Quantale::chain(3, 2).unwrap()),
        Arc::new(Quantale::lawvere()),
        Arc::new(Quantale::ultrametric()),
    ];
    let functors = [
        SetFunctor::Identity,
        SetFunctor::Powerset,
        SetFunctor::Multiset(2),
        SetFunctor::Power(2),
        SetFunctor::Const(vec!["p".into()]),
        SetFunctor::List(2),
    ];
    for q in &integral {
        for t in &functors {
            ensure(unit_iso_check(&Discrete::new(q.clone(), t.clone())).unwrap(), || format!("D∘{t} over {}", q.kind()))?;
        }
    }
    let non_integral = chain3()[0].clone();
    ensure(unit_iso_check(&Discrete::identity(non_integral.clone())).unwrap(), || "H(∅) = ∅ over chain-3 (e = 1)".into())?;
    let power = Discrete::new(non_integral.clone(), SetFunctor::Power(3));
    ensure(unit_iso_check(&power).unwrap(), || "power(3) has H(∅) = ∅".into())?;
    let one = ConstantOne::new(non_integral.clone());
    ensure(!unit_iso_check(&one).unwrap(), || "constant one over chain-3 (e = 1) should fail".into())?;
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..10 {
        let x = random_space(&non_integral, i % 4, &mut rng);
        let ext = lan_extend(&one, &x).map_err(|e| e.to_string())?;
        ensure(ext.same_distances(&VCat::top_point(non_integral.clone())), || format!("constant one on {}", describe(&x)))?;
    }
    Ok(format!("{} integral cases, 10 random extensions of the constant one", integral.len() * functors.len()))
}

fn criterion_7() -> Check {
    let compose = SetFunctor::compose(SetFunctor::Powerset, SetFunctor::Powerset);
    let product = SetFunctor::product([SetFunctor::Powerset, SetFunctor::Power(2)]);
    let boolean = Arc::new(Quantale::boolean());
    let mut compositions = 0;
    for q in [boolean.clone(), Arc::new(Quantale::chain(3, 2).unwrap())] {
        for n in 0..=3 {
            for x in all_spaces(&q, n) {
                let direct = vcatify_wpb(&compose, &x).map_err(|e| e.to_string())?;
                let inner = vcatify_wpb(&SetFunctor::Powerset, &x).map_err(|e| e.to_string())?;
                let iterated = vcatify_wpb(&SetFunctor::Powerset, &inner).map_err(|e| e.to_string())?;
                ensure(direct.same_distances(&iterated), || format!("composition on {}", describe(&x)))?;
                compositions += 1;
            }
        }
    }
    let mut products = 0;
    for n in 0..=3 {
        for x in all_spaces(&boolean, n) {
            let joint = vcatify_wpb(&product, &x).map_err(|e| e.to_string())?;
            let left = vcatify_wpb(&SetFunctor::Powerset, &x).map_err(|e| e.to_string())?;
            let right = vcatify_wpb(&SetFunctor::Power(2), &x).map_err(|e| e.to_string())?;
            let m = right.len();
            for a in 0..joint.len() {
                for b in 0..joint.len() {
                    let expect = boolean.meet2(left.d(a / m, b / m), right.d(a % m, b % m));
                    ensure(joint.d(a, b) == expect, || format!("product pairing on {}", describe(&x)))?;
                }
            }
            products += 1;
        }
    }
    Ok(format!("{compositions} composition cases, {products} product cases"))
}

fn random_presheaf(q: &Arc<Quantale>, n: usize, rng: &mut StdRng) -> RelPresheaf {
    let elements = q.elements().unwrap();
    let entries = elements
        .iter()
        .filter(|_| rng.gen_bool(0.7))
        .copied()
        .collect::<Vec<_>>()
        .into_iter()
        .map(|r| {
            let pairs: Vec<(usize, usize)> = (0..n * n).filter(|_| rng.gen_bool(0.5)).map(|k| (k / n, k % n)).collect();
            (r, Relation::from_pairs(n, n, pairs))
        })
        .collect();
    RelPresheaf::new(q.clone(), vcat::generate::labels(n), entries).unwrap()
}

fn criterion_8() -> Check {
    let mut fixtures = fixture_spaces().into_iter().map(|(_, x)| x).collect::<Vec<_>>();
    for q in chain3().into_iter().chain([Arc::new(Quantale::boolean())]) {
        for n in 0..=3 {
            fixtures.extend(all_spaces(&q, n));
        }
    }
    for x in &fixtures {
        let back = RelPresheaf::from_space(x).to_space().map_err(|e| format!("{}: {e}", describe(x)))?;
        ensure(back.same_as(x), || format!("round trip changed {}", describe(x)))?;
    }

    let mut rng = StdRng::seed_from_u64(8);
    let cd = [chain3()[0].clone(), Arc::new(Quantale::chain(4, 2).unwrap()), Arc::new(io::load_quantale(&fixtures_dir().join("diamond.json")).unwrap())];
    for i in 0..20 {
        let q = &cd[i % cd.len()];
        let p = random_presheaf(q, 1 + i % 3, &mut rng);
        let once = p.closure().map_err(|e| e.to_string())?;
        let twice = once.closure().map_err(|e| e.to_string())?;
        ensure(once.same_values(&twice), || format!("closure not idempotent on presheaf {i}"))?;
    }

    let mut identities = 0;
    let chain4 = Arc::new(Quantale::chain(4, 3).unwrap());
    let elements = chain4.elements().unwrap();
    let mut spaces: Vec<VCat> = (0..=2).flat_map(|n| all_spaces(&chain4, n)).collect();
    spaces.extend((0..20).map(|i| random_space(&chain4, 3 + i % 2, &mut rng)));
    for x in &spaces {
        let lifted = vcatify_wpb(&SetFunctor::Powerset, x).map_err(|e| e.to_string())?;
        let phi = RelPresheaf::from_space(x);
        let carrier = SetFunctor::Powerset.apply_on_set(x.len()).unwrap();
        let entries = phi
            .entries()
            .map(|(r, rel)| Ok((r, SetFunctor::Powerset.relation_lift(rel)?)))
            .collect::<vcat::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let labels: Vec<String> = carrier.terms.iter().map(|t| SetFunctor::render(t, x.objects())).collect();
        let closed = RelPresheaf::new(chain4.clone(), labels, entries).and_then(|p| p.closure()).map_err(|e| e.to_string())?;
        for &r in &elements {
            ensure(closed.value_at(r) == lifted.level_relation(r), || {
                format!("level {} of {}", chain4.format_elem(r), describe(x))
            })?;
            identities += 1;
        }
    }
    Ok(format!("{} round trips, 20 closures, {identities} level identities", fixtures.len()))
}

fn criterion_9() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    let outputs = [
        io::load_space(&fixtures_dir().join("lawvere_line.json")).unwrap(),
        io::load_space(&fixtures_dir().join("boolean_poset.json")).unwrap(),
        io::load_space(&fixtures_dir().join("ultrametric_tree.json")).unwrap(),
    ];
    for i in 0..25 {
        let output = outputs[i % outputs.len()].clone();
        let q = output.quantale().clone();
        let m = random_machine(rng.gen_range(1..=6), rng.gen_range(1..=2), output, &mut rng);
        let d = beh_metric_words(&m, 36);
        let k = Partition::from_equivalence(&kernel(&q, &d)).map_err(|e| format!("machine {i}: {e}"))?;
        let b = bisimilarity(&m);
        ensure(k == b, || format!("machine {i}: kernel {k} but bisimilarity {b}"))?;
    }
    Ok("25 random machines".into())
}

/// Exact inclusion oracle: no reachable pair of states accepts on the left
/// and rejects on the right.
fn included(m: &vcat::coalgebra::MachineCoalgebra, x: usize, y: usize) -> bool {
    let n = m.states().len();
    let mut seen = vec![false; n * n];
    let mut stack = vec![(x, y)];
    seen[x * n + y] = true;
    while let Some((a, b)) = stack.pop() {
        if m.out(a) == 1 && m.out(b) == 0 {
            return false;
        }
        for i in 0..m.inputs().len() {
            let (a2, b2) = (m.next(a, i), m.next(b, i));
            if !seen[a2 * n + b2] {
                seen[a2 * n + b2] = true;
                stack.push((a2, b2));
            }
        }
    }
    true
}

fn criterion_10() -> Check {
    let q = Arc::new(Quantale::boolean());
    let output = VCat::two_rs(q.clone(), q.top(), q.bottom()).unwrap();
    let mut rng = StdRng::seed_from_u64(10);
    let mut pairs = 0;
    for i in 0..10 {
        let m = random_machine(rng.gen_range(2..=5), rng.gen_range(1..=2), output.clone(), &mut rng);
        let d = beh_metric_words(&m, 36);
        for x in 0..m.states().len() {
            for y in 0..m.states().len() {
                ensure((d[x][y] == q.top()) == included(&m, x, y), || format!("dfa {i}, states {x}, {y}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("10 random DFAs, {pairs} state pairs"))
}

fn criterion_11() -> Check {
    let mut spaces = 0;
    let [c1, c2] = chain3();
    for q in [Arc::new(Quantale::boolean()), c1, c2] {
        let p = PredicateLifting::join(q.clone()).map_err(|e| e.to_string())?;
        let h = DiscreteKantorovich::new(p.clone());
        for n in 0..=3 {
            for x in all_spaces(&q, n) {
                let ext = lan_extend(&h, &x).map_err(|e| e.to_string())?;
                let lifted = kantorovich_lift(&p, &x).map_err(|e| e.to_string())?;
                let below = (0..ext.len()).all(|a| (0..ext.len()).all(|b| q.le(ext.d(a, b), lifted.d(a, b))));
                ensure(below, || format!("extension exceeds the lifting on {}", describe(&x)))?;
                spaces += 1;
            }
        }
        ensure(h.quantale() == &q, || "lifting quantale".into())?;
    }
    Ok(format!("{spaces} spaces"))
}

fn criterion_12() -> Check {
    let q = Arc::new(Quantale::lawvere());
    let discrete = VCat::discrete(q.clone(), vec!["a".into(), "b".into()]);
    let g_discrete = power_by_two(&discrete, q.unit()).map_err(|e| e.to_string())?;
    ensure(g_discrete.is_discrete() && g_discrete.len() == 2, || format!("G D{{a,b}} = {}", describe(&g_discrete)))?;
    let x = io::load_space(&fixtures_dir().join("lawvere_asym.json")).map_err(|e| e.to_string())?;
    let g = power_by_two(&x, q.unit()).map_err(|e| e.to_string())?;
    let ext = lan_extend(&Discrete::identity(q.clone()), &x).map_err(|e| e.to_string())?;
    ensure(g.matrix() != ext.matrix(), || "power-by-two agrees with the extension".into())?;
    Ok(format!("G X has {} objects, the extension {}", g.len(), ext.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("quantale law suite", criterion_1),
        ("Kan extension of D is the identity", criterion_2),
        ("zig-zag closure equals relation lifting", criterion_3),
        ("Hausdorff closed form", criterion_4),
        ("matching metric", criterion_5),
        ("unit isomorphism", criterion_6),
        ("composition and product identities", criterion_7),
        ("relational presheaves", criterion_8),
        ("behavioural equivalence coincidence", criterion_9),
        ("DFA language inclusion", criterion_10),
        ("Kantorovich comparison", criterion_11),
        ("non-extension witness", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all criteria pass");
}
