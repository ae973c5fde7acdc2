//! One line per acceptance criterion; exits nonzero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rtk_core::approx::{self, ApproximationStructure};
use rtk_core::convex::{self, PointSpec};
use rtk_core::embed::DEFAULT_SEED;
use rtk_core::locality::{self, MonoidAlgebra};
use rtk_core::theory::DEFAULT_CAP;
use rtk_core::{laws, Error, GaloisInsertion, Lumping, Report, ResourceTheory, SpecMap, Specification, StateSpace, TransformationMonoid};

type Outcome = Result<Vec<String>, String>;

const SEED: u64 = 0x5eed;
const LIMIT: Duration = Duration::from_secs(10);

fn require(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn report(name: &str, r: &Report) -> Result<(), String> {
    match r.first_failure() {
        None => Ok(()),
        Some(c) => Err(format!("{name}: {} failed ({})", c.name, c.witness.as_deref().unwrap_or(""))),
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn animals() -> Outcome {
    let s = StateSpace::new(["cheetah", "leopard", "jaguar", "puma", "lynx"]).map_err(err)?;
    let a = Specification::from_labels(&s, ["cheetah", "leopard"]).map_err(err)?;
    let b = Specification::from_labels(&s, ["jaguar", "leopard"]).map_err(err)?;
    let both = a.combine(&b).map_err(err)?;
    require(both.labels() == vec!["leopard"], format!("combined to {both}"))?;
    let c = Specification::from_labels(&s, ["puma", "lynx"]).map_err(err)?;
    match both.combine(&c) {
        Err(Error::Incompatible(_)) => {}
        other => return Err(format!("expected Incompatible, got {other:?}")),
    }
    Ok(vec![])
}

fn suite(name: &str, r: Report) -> Outcome {
    report(name, &r)?;
    Ok(r.notes)
}

fn on_bit(s: &StateSpace, mask: usize) -> Vec<SpecMap> {
    vec![
        SpecMap::endo_from_fn(s, move |i| i ^ mask),
        SpecMap::endo_from_fn(s, move |i| i & !mask),
        SpecMap::endo_from_fn(s, move |i| i | mask),
    ]
}

struct TwoBit {
    s: StateSpace,
    alg: MonoidAlgebra,
    /// Maps acting on the first bit only, with the identity.
    a: rtk_core::BitSet,
    b: rtk_core::BitSet,
    exchange: SpecMap,
}

fn two_bit() -> Result<TwoBit, String> {
    let s = StateSpace::bit_strings(2);
    let all = TransformationMonoid::all_functions(&s, DEFAULT_CAP).map_err(err)?;
    if all.len() != 256 {
        return Err(format!("{} maps on 2-bit strings", all.len()));
    }
    let alg = MonoidAlgebra::new(all);
    let mut a = alg.subset_of(&on_bit(&s, 2)).map_err(err)?;
    a.insert(0);
    let mut b = alg.subset_of(&on_bit(&s, 1)).map_err(err)?;
    b.insert(0);
    let exchange = SpecMap::endo_from_fn(&s, |i| [0, 2, 1, 3][i]);
    Ok(TwoBit { s, alg, a, b, exchange })
}

fn locality_derivation() -> Outcome {
    let t = two_bit()?;
    let alg = &t.alg;
    require(alg.commutant(&t.a) == t.b, "commutant(A) ≠ B")?;
    require(alg.bicommutant(&t.a) == t.a, "bicommutant(A) ≠ A")?;
    require(alg.join(&t.a, &t.b).map_err(err)? == alg.all(), "join(A, B) ≠ T")?;
    require(alg.centre(&alg.all()).map_err(err)? == alg.identity_only(), "centre(T) ≠ {id}")?;
    let ag = alg.derive_agents(&t.a, &t.b, DEFAULT_CAP).map_err(err)?;
    for (who, th) in [("A", &ag.theory_a), ("B", &ag.theory_b)] {
        let one_bit = TransformationMonoid::all_functions(th.space(), DEFAULT_CAP).map_err(err)?;
        require(th.space().size() == 2, format!("agent {who} space has {} states", th.space().size()))?;
        let mut got: Vec<String> = th.monoid().elements().iter().map(|f| f.to_string()).collect();
        let mut want: Vec<String> = one_bit.elements().iter().map(|f| f.to_string()).collect();
        got.sort();
        want.sort();
        require(got == want, format!("agent {who} monoid is {got:?}"))?;
    }
    report("certificate", &ag.certificate)?;
    let specs: Vec<Specification> = (1..16usize)
        .map(|m| Specification::from_labels(&t.s, (0..4).filter(|i| m >> i & 1 == 1).map(|i| t.s.labels()[i].clone())))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut checked = 0;
    for f in alg.maps(&t.a) {
        for g in alg.maps(&t.b) {
            for v in &specs {
                let ok = locality::check_agents_theorem(&ag, &f, &g, v).map_err(err)?;
                require(ok, format!("inclusion fails for f = [{f}], g = [{g}], V = {v}"))?;
                checked += 1;
            }
        }
    }
    Ok(vec![format!("inclusion checked on {checked} (f_A, g_B, V) triples")])
}

fn lattice() -> Outcome {
    let t = two_bit()?;
    let l = t.alg.enumerate_complete(None, 10_000).map_err(err)?;
    report("lattice laws", &l.check_laws(DEFAULT_SEED))?;
    require(l.nodes[l.bottom] == t.alg.commutant(&t.alg.all()), "bottom ≠ commutant(T)")?;
    require(l.nodes[l.top] == t.alg.all(), "top ≠ T")?;
    Ok(vec![format!("{} complete subsystems, {} covering pairs", l.len(), l.hasse().len())])
}

fn copies() -> Outcome {
    let t = two_bit()?;
    let u = &t.exchange;
    let iso = t.alg.conjugation_iso(&t.a, u, u).map_err(err)?;
    let r = t.alg.verify_swap(&t.a, &t.b, &iso, u, u).map_err(err)?;
    report("swap", &r)?;
    let ag = t.alg.derive_agents(&t.a, &t.b, DEFAULT_CAP).map_err(err)?;
    // Index 0 of the reduced space is "bit 1 is 0".
    let v_a = ag.ins_a.small().singleton(0);
    let id = SpecMap::identity(&t.s);
    let two = locality::n_copies(&ag.ins_a, &v_a, &[id, u.clone()]).map_err(err)?;
    require(two.labels() == vec!["00"], format!("two copies give {two}"))?;
    let none = locality::n_copies(&ag.ins_a, &v_a, &[]).map_err(err)?;
    require(none == t.s.full(), format!("zero copies give {none}"))?;
    Ok(vec![format!("swap verified over {} (f_A, g_B) pairs", t.a.count() * t.b.count())])
}

fn approximations() -> Outcome {
    let h = ApproximationStructure::hamming(2);
    let s = h.space().clone();
    let vr = approx::verify_structure(&h);
    report("structure", &vr)?;
    require(h.is_attainable(), "not attainable")?;
    report("triangle", &approx::check_triangle(&h, DEFAULT_SEED).map_err(err)?)?;
    let v = Specification::from_labels(&s, ["00"]).map_err(err)?;
    let id_only = ResourceTheory::new(TransformationMonoid::close(&s, vec![], 1).map_err(err)?);
    require(approx::is_robust(&id_only, &h, &v, "1").map_err(err)?, "{00} not 1-robust under {id}")?;
    let into_ball = SpecMap::constant(&s, &Specification::from_labels(&s, ["01"]).map_err(err)?);
    let with_const = ResourceTheory::new(TransformationMonoid::close(&s, vec![into_ball], 10).map_err(err)?);
    require(approx::is_stable(&with_const, &h).map_err(err)?, "constant theory not stable")?;
    require(!approx::is_robust(&with_const, &h, &v, "1").map_err(err)?, "{00} still 1-robust with a constant")?;
    let first_bit = GaloisInsertion::from_lumping(&Lumping::from_partition(&s, |i| i >> 1)).map_err(err)?;
    let red = approx::reduce_structure(&h, &first_bit).map_err(err)?;
    report("reduced structure", &approx::verify_structure(&red.structure))?;
    let r = laws::robustness(SEED, 200);
    report("robustness", &r)?;
    let mut notes = r.notes;
    notes.push(
        "the implication is checked as stable ∧ V → W ∧ W robust ⇒ V robust; the literal converse is counted above"
            .into(),
    );
    Ok(notes)
}

fn convexity() -> Outcome {
    let r = laws::convexity(SEED, 1000, 200);
    report("convexity", &r)?;
    let line = PointSpec::new(["0", "1/2", "1"].iter().map(|x| convex::RationalPoint::new(vec![convex::parse_q(x).unwrap()])).collect())
        .map_err(err)?;
    let ext = convex::extreme_points(&line);
    require(ext == PointSpec::line(&[0, 1]).map_err(err)?, format!("extreme points {ext}"))?;
    Ok(r.notes)
}

fn theories() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../theories")
}

/// Runs the binary and returns (exit code, stdout, stderr).
fn rtk(args: &[&str], env: &[(&str, &str)]) -> Result<(i32, Vec<u8>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rtk"))
        .args(args)
        .env_remove("RTK_CAP")
        .envs(env.iter().copied())
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout, out.stderr))
}

fn determinism() -> Outcome {
    let dir = theories();
    let f = |n: &str| dir.join(n).display().to_string();
    let (four, two, conv, animals) = (f("four.rt"), f("twobit.rt"), f("convex.rt"), f("animals.rt"));
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["check", &four], 0),
        (vec!["check", &two], 0),
        (vec!["check", &conv], 0),
        (vec!["check", &animals], 0),
        (vec!["reach", &four, "--monoid", "T", "--from", "a b", "--to", "a"], 0),
        (vec!["reach", &four, "--monoid", "T", "--from", "c", "--to", "a"], 1),
        (vec!["free", &four, "--monoid", "T", "--spec", "a b c d"], 0),
        (vec!["free", &four, "--monoid", "T", "--spec", "a"], 1),
        (vec!["quotient", &four, "--monoid", "T", "--all-specs", "--dot", "-"], 0),
        (vec!["conserved", &four, "--monoid", "Swaps", "--spec", "c d"], 0),
        (vec!["combine", &animals, "--spec", "cheetah leopard", "--spec", "jaguar leopard"], 0),
        (vec!["combine", &animals, "--spec", "leopard", "--spec", "puma lynx"], 1),
        (vec!["combine", &four, "--monoid", "T", "--with", "Swaps"], 0),
        (vec!["lumping", &four, "--lumping", "ab"], 0),
        (vec!["lumping", &four, "--map", "merge_ab"], 1),
        (vec!["lumping", &two, "--monoid", "A"], 0),
        (vec!["embed", &four, "--map", "e"], 0),
        (vec!["decompose", &four, "--map", "e"], 0),
        (vec!["decompose", &four, "--map", "e", "--order", "int-ext"], 0),
        (vec!["nest", &four, "--outer", "ab", "--inner", "ab_cd"], 0),
        (vec!["restrict", &four, "--monoid", "T", "--agent", "Swaps", "--lumping", "ab"], 0),
        (vec!["effective", &four, "--monoid", "T", "--agent", "Swaps", "--lumping", "ab", "--side", "a c d"], 0),
        (vec!["commutant", &two, "--monoid", "All", "--subset", "A"], 0),
        (vec!["bicommutant", &two, "--monoid", "All", "--subset", "A"], 0),
        (vec!["subsystems", &two, "--monoid", "All", "--seeds", "A,B", "--dot", "-"], 0),
        (vec!["independence", &two, "--monoid", "All", "--a", "A", "--b", "B"], 0),
        (vec!["swap", &two, "--monoid", "All", "--a", "A", "--b", "B", "--u", "exchange", "--u-inv", "exchange"], 0),
        (vec!["copies", &two, "--lumping", "bit1", "--spec", "00+01", "--swap", "id", "--swap", "exchange"], 0),
        (vec!["approx-verify", &two, "--approx", "H"], 0),
        (vec!["approx-robust", &two, "--monoid", "Still", "--approx", "H", "--spec", "00", "--eps", "1"], 0),
        (vec!["approx-robust", &two, "--monoid", "Reset", "--approx", "H", "--spec", "00", "--eps", "1"], 1),
        (vec!["approx-reduce", &two, "--approx", "H", "--lumping", "bit1"], 0),
        (vec!["hull", &conv, "--points", "ends", "--point", "1/3"], 0),
        (vec!["hull", &conv, "--points", "ends", "--point", "2"], 1),
        (vec!["extreme", &conv, "--points", "unit"], 0),
        (vec!["prob-equiv", &conv, "--points", "square", "--with", "corners"], 0),
        (vec!["prob-equiv", &conv, "--points", "unit", "--with", "ends"], 0),
        (vec!["laws", "--suite", "lumping"], 0),
        (vec!["--oracle", "reach", &four, "--monoid", "T", "--from", "a b", "--to", "a"], 0),
        (vec!["--oracle", "hull", &conv, "--points", "square", "--point", "1/2 1/2"], 0),
        (vec!["check", "/nonexistent/theory.rt"], 2),
        (vec!["reach", &four, "--monoid", "Nope", "--from", "a", "--to", "a"], 2),
        (vec!["reach", &four, "--monoid", "T", "--from", "z", "--to", "a"], 2),
        (vec!["frobnicate"], 2),
    ];
    let mut commands = std::collections::BTreeSet::new();
    for (args, want) in &cases {
        let first = rtk(args, &[])?;
        let second = rtk(args, &[])?;
        require(first == second, format!("output differs between runs: {args:?}"))?;
        require(first.0 == *want, format!("{args:?} exited {} (want {want}): {}", first.0, String::from_utf8_lossy(&first.2)))?;
        if let Some(c) = args.iter().find(|a| !a.starts_with('-')) {
            commands.insert(c.to_string());
        }
    }
    let (code, _, _) = rtk(&["check", &two], &[("RTK_CAP", "10")])?;
    require(code == 3, format!("cap overflow exited {code}"))?;
    let bad = std::env::temp_dir().join(format!("rtk-acceptance-{}.rt", std::process::id()));
    std::fs::write(&bad, "[states] a b\n[map f] a->{} b->b\n").map_err(|e| e.to_string())?;
    let (code, _, _) = rtk(&["check", &bad.display().to_string()], &[])?;
    std::fs::remove_file(&bad).map_err(|e| e.to_string())?;
    require(code == 2, format!("malformed file exited {code}"))?;
    // 25 subcommands plus the unknown one.
    require(commands.len() == 26, format!("{} distinct subcommands exercised", commands.len()))?;
    Ok(vec![format!("{} invocations, each run twice", cases.len())])
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("animal combination", Box::new(animals)),
        ("pre-order laws", Box::new(|| suite("preorder", laws::preorder(SEED, 500)))),
        ("lumping gives a Galois insertion", Box::new(|| suite("lumping", laws::lumping_insertion(SEED, 200)))),
        ("decomposition", Box::new(|| suite("decomposition", laws::decomposition(SEED, 100)))),
        ("free-composition equivalence", Box::new(|| suite("free composition", laws::free_composition(SEED, 200)))),
        ("locality derivation", Box::new(locality_derivation)),
        ("lattice laws", Box::new(lattice)),
        ("copies", Box::new(copies)),
        ("approximations", Box::new(approximations)),
        ("convexity laws", Box::new(convexity)),
        ("CLI determinism and exit codes", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(notes) if took >= LIMIT => Err(format!("took {took:.1?}; {}", notes.join("; "))),
            o => o,
        };
        match outcome {
            Ok(notes) => {
                println!("criterion {}: pass  {name} ({took:.2?})", k + 1);
                for n in notes {
                    println!("    note: {n}");
                }
            }
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}): {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
