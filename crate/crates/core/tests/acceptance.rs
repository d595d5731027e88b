//! Acceptance suite, one line per criterion. Runs without the test harness
//! so the lines are always printed: `cargo test --test acceptance`.

mod support;

use std::time::{Duration, Instant};

use conelab::catalog::{get_lattice, names};
use conelab::cli::run;
use conelab::cone::find_interior_class;
use conelab::render::{render_svg, Scene};
use conelab::{
    canonical_cusp, chamber_graph, cusp_orbits, find_isotropic, hyperbolic_distance, nef_certificate, nef_walk,
    separating_walls, CuspBounds, LatVec, Lattice, WalkOrder,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random (-2)-vector of the K3 entry: (1, k, r) with r in the negative part.
fn k3_wall(rng: &mut ChaCha8Rng, l: &Lattice) -> LatVec {
    let mut c = vec![0i64; 22];
    for e in c.iter_mut().skip(2) {
        *e = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
    }
    let q = i64::try_from(&l.quad(&v(&c)).unwrap()).unwrap();
    c[0] = 1;
    c[1] = (-2 - q) / 2;
    v(&c)
}

fn reflection_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let lattices: Vec<Lattice> = names().iter().map(|n| get_lattice(n).unwrap()).collect();
    let walls: Vec<Vec<LatVec>> = lattices
        .iter()
        .map(|l| {
            if l.rank() > 5 {
                (0..40).map(|_| k3_wall(&mut rng, l)).collect()
            } else {
                conelab::vectors_of_square(l, &BigInt::from(-2), 3).unwrap()
            }
        })
        .collect();
    let mut triples = 0;
    let mut fixed = 0;
    while triples < 1200 {
        let i = rng.gen_range(0..lattices.len());
        let (l, ws) = (&lattices[i], &walls[i]);
        if ws.is_empty() {
            continue;
        }
        let w = &ws[rng.gen_range(0..ws.len())];
        check(l.quad(w).unwrap() == BigInt::from(-2), || format!("{w} is not a (-2)-vector"))?;
        let x = v(&(0..l.rank()).map(|_| rng.gen_range(-20..=20)).collect::<Vec<_>>());
        let Ok(y) = l.reflect(w, &x) else { continue };
        triples += 1;
        check(l.reflect(w, &y).unwrap() == x, || format!("{}: σσ ≠ id at {x}", l.name()))?;
        check(l.quad(&y).unwrap() == l.quad(&x).unwrap(), || format!("{}: q changed at {x}", l.name()))?;
        let p = x.scaled(&l.quad(w).unwrap()).add_scaled(&-l.pair(&x, w).unwrap(), w);
        if !p.is_zero() {
            check(l.reflect(w, &p).unwrap() == p, || format!("{}: {p} not fixed", l.name()))?;
            fixed += 1;
        }
    }
    Ok(format!("{triples} triples, {fixed} mirror points fixed"))
}

fn nef_walk_descent() -> Outcome {
    let t0 = Instant::now();
    let l = get_lattice("U+<-2>").unwrap();
    let h = v(&[3, 2, 1]);
    let t = nef_walk(&l, &v(&[1, 1, -1]), &h, WalkOrder::Greedy).map_err(|e| e.to_string())?;
    t.verify(&l).map_err(|e| e.to_string())?;
    let pairings: Vec<BigInt> = std::iter::once(t.start_pairing.clone())
        .chain(t.steps.iter().map(|s| s.pairing.clone()))
        .collect();
    check(pairings == vec![BigInt::from(7), BigInt::from(2)], || format!("pairings {pairings:?}"))?;
    check(t.final_class == v(&[1, 0, 0]), || format!("final {}", t.final_class))?;
    check(nef_certificate(&l, &t.final_class, &h).unwrap().nef, || "final not nef".into())?;
    let took = t0.elapsed();
    check(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("7 -> 2 over {}, {took:?}", t.steps[0].wall.vector()))
}

fn separating_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut instances = 0;
    let mut walls_seen = 0;
    let mut nonempty = 0;
    while instances < 60 {
        let rank = 2 + instances % 3;
        let squares: &[i64] = if instances % 2 == 0 { &[-2] } else { &[-1, -2, -4] };
        let l = random_hyperbolic(&mut rng, rank, squares);
        let x = random_positive(&mut rng, &l, 5).to_i64s().unwrap();
        let h = random_positive(&mut rng, &l, 5).to_i64s().unwrap();
        let b = separating_oracle_bound(&l, &x, &h);
        if b > [400, 40, 12][rank - 2] {
            continue;
        }
        let got = as_set(&separating_walls(&l, &v(&x), &v(&h), true).map_err(|e| e.to_string())?);
        let want = separating_box(&l, &x, &h, true, b);
        check(got == want, || format!("gram {:?} x {x:?} h {h:?}: {got:?} vs {want:?}", l.gram()))?;
        walls_seen += got.len();
        nonempty += usize::from(!got.is_empty());
        instances += 1;
    }
    let l = get_lattice("U+<-2>").unwrap();
    let got = as_set(&separating_walls(&l, &v(&[1, 1, -1]), &v(&[3, 2, 1]), true).unwrap());
    let want = [vec![0, 0, -1], vec![1, 0, -1], vec![0, 1, -1]].into_iter().collect();
    check(got == want, || format!("worked example gave {got:?}"))?;
    Ok(format!("{instances} instances ({nonempty} with walls, {walls_seen} walls), worked example exact"))
}

fn meyer_desk_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut worst = 0;
    for _ in 0..100 {
        let mut diag = vec![rng.gen_range(1..=9i64)];
        diag.extend((0..4).map(|_| -rng.gen_range(1..=9i64)));
        diag.shuffle(&mut rng);
        let l = Lattice::diagonal("meyer", &diag).unwrap();
        match find_isotropic(&l, 50) {
            Some(x) => {
                check(l.quad(&x).unwrap().is_zero(), || format!("{x} not isotropic"))?;
                worst = worst.max(i64::try_from(x.sup_norm()).unwrap());
            }
            None => return Err(format!("no isotropic vector for diag{diag:?} at bound 50")),
        }
    }
    let l = get_lattice("diag(1,-3)").unwrap();
    check(find_isotropic(&l, 100).is_none(), || "diag(1,-3) has an isotropic vector".into())?;
    Ok(format!("100/100 found, largest sup-norm {worst}; diag(1,-3) empty at 100"))
}

fn cusp_classification() -> Outcome {
    let b = |iso, wall, depth| CuspBounds {
        iso_bound: iso,
        wall_bound: wall,
        bfs_depth: depth,
    };
    let mut words = 0;
    for (name, bounds, expected) in [
        ("U", b(1, 1, 4), 1),
        ("<2>+<-2>", b(2, 1, 4), 1),
        ("diag(1,-3)", b(5, 2, 4), 0),
    ] {
        let l = get_lattice(name).unwrap();
        let r = cusp_orbits(&l, bounds).map_err(|e| e.to_string())?;
        check(r.orbits.len() == expected, || format!("{name}: {} orbits", r.orbits.len()))?;
        for o in &r.orbits {
            o.verify(&l).map_err(|e| e.to_string())?;
            words += o.words.len();
        }
    }
    let u = get_lattice("U").unwrap();
    let r = cusp_orbits(&u, b(1, 1, 4)).unwrap();
    check(r.orbits[0].words[1] == vec![v(&[1, -1])], || format!("U words {:?}", r.orbits[0].words))?;
    Ok(format!("U 1, <2>+<-2> 1, diag(1,-3) 0; {words} words replayed"))
}

fn k3_interior_base() -> LatVec {
    // e, f coefficients exceed every root pairing with the Weyl vectors
    let rho = [46i64, 68, 91, 135, 110, 84, 57, 29];
    let mut h = vec![61i64, 67];
    h.extend(rho);
    h.extend(rho.iter().map(|c| 2 * c));
    h.extend([1, 2, 3, 4]);
    v(&h)
}

fn finiteness_illustration() -> Outcome {
    let l = get_lattice("<2>+<-2>").unwrap();
    let h0 = find_interior_class(&l, 5).unwrap().unwrap();
    let g = chamber_graph(&l, &h0, 10.0).map_err(|e| e.to_string())?;
    let got = (g.nodes.len(), g.edges.len(), g.orbit_count);
    check(got == (2, 1, 1), || format!("<2>+<-2> radius 10: {got:?}"))?;
    let mut summary = Vec::new();
    for name in names() {
        let l = get_lattice(name).unwrap();
        let (h0, radii): (LatVec, &[f64]) = match *name {
            "diag(1,-1,-1,-1,-1)" => (v(&[23, 2, 5, 9, 17]), &[0.1, 0.2, 0.3]),
            "K3" => (k3_interior_base(), &[0.005, 0.02]),
            "U+<-2>" => (find_interior_class(&l, 5).unwrap().unwrap(), &[0.5, 1.0, 2.0, 3.0]),
            _ => (find_interior_class(&l, 5).unwrap().unwrap(), &[0.5, 1.0, 2.0, 4.0, 6.0]),
        };
        let t = Instant::now();
        let mut counts = Vec::new();
        for &r in radii {
            counts.push(chamber_graph(&l, &h0, r).map_err(|e| format!("{name}: {e}"))?.nodes.len());
        }
        check(counts.windows(2).all(|w| w[0] <= w[1]), || format!("{name}: {counts:?}"))?;
        summary.push(format!("{name} {counts:?} in {:.1?}", t.elapsed()));
    }
    Ok(format!("2 chambers/1 edge/1 orbit; {}", summary.join(", ")))
}

fn hyperbolic_metric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let lattices: Vec<Lattice> = ["U", "U+<-2>", "<2>+<-2>", "diag(1,-1,-1,-1,-1)", "diag(1,-3)"]
        .iter()
        .map(|n| get_lattice(n).unwrap())
        .collect();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000 {
        let l = &lattices[i % lattices.len()];
        let (x, y, z) = (
            random_positive(&mut rng, l, 8),
            random_positive(&mut rng, l, 8),
            random_positive(&mut rng, l, 8),
        );
        let d = |a: &LatVec, b: &LatVec| hyperbolic_distance(l, a, b).unwrap();
        check(d(&x, &y) == d(&y, &x), || format!("asymmetric at {x}, {y}"))?;
        check(d(&x, &x) == 0.0, || format!("d(x,x) ≠ 0 at {x}"))?;
        let slack = d(&x, &z) - d(&x, &y) - d(&y, &z);
        worst = worst.max(slack);
        check(slack <= 1e-9, || format!("triangle fails by {slack} at {x}, {y}, {z}"))?;
    }
    let l = Lattice::diagonal("diag(1,-1)", &[1, -1]).unwrap();
    let got = hyperbolic_distance(&l, &v(&[2, 1]), &v(&[1, 0])).unwrap();
    let want = (2.0 / 3.0f64.sqrt()).acosh();
    check((got - want).abs() < 1e-12, || format!("{got} vs {want}"))?;
    Ok(format!("1000 triples, worst triangle slack {worst:.3e}; example error {:.1e}", (got - want).abs()))
}

fn isotropic_to_nef_pipeline() -> Outcome {
    let l = get_lattice("U+<-2>").unwrap();
    let x = find_isotropic(&l, 10).ok_or("no isotropic vector")?;
    let x = if l.in_closed_cone(&x) { x } else { -x };
    let mut out = Vec::new();
    for h in [find_interior_class(&l, 5).unwrap().unwrap(), v(&[3, 2, 1])] {
        let (c, trace) = canonical_cusp(&l, &x, &h).map_err(|e| e.to_string())?;
        check(l.quad(&c).unwrap().is_zero() && c.is_primitive(), || format!("{c} not primitive isotropic"))?;
        check(nef_certificate(&l, &c, &h).unwrap().nef, || format!("{c} not nef against {h}"))?;
        trace.verify(&l).map_err(|e| e.to_string())?;
        let doc = conelab::json::walk_trace(&trace);
        let replayed = doc["steps"]
            .as_array()
            .unwrap()
            .iter()
            .try_fold(trace.start.clone(), |cur, s| {
                let w = conelab::json::parse_vec(&s["wall"]).unwrap();
                l.reflect(&w, &cur)
            })
            .map_err(|e| e.to_string())?;
        check(replayed == c, || format!("JSON trace replays to {replayed}"))?;
        out.push(format!("h={h}: {x} -> {c} in {} steps", trace.steps.len()));
    }
    Ok(out.join("; "))
}

fn cli_determinism() -> Outcome {
    let examples: &[&[&str]] = &[
        &["pair", "--lattice", "U+<-2>", "--x", "1,1,-1", "--y", "3,2,1"],
        &["quad", "--lattice", "U+<-2>", "--x", "1,1,-1"],
        &["signature", "--lattice", "K3"],
        &["walls", "--lattice", "U+<-2>", "--bound", "2"],
        &["separating", "--lattice", "U+<-2>", "--x", "1,1,-1", "--h", "3,2,1"],
        &["isotropic", "--lattice", "diag(1,-1,-1,-1,-1)", "--bound", "2", "--all"],
        &["isotropic", "--meyer-check", "10", "--seed", "7"],
        &["cusps", "--lattice", "U", "--iso-bound", "1", "--wall-bound", "1", "--depth", "4"],
        &["nef-walk", "--lattice", "U+<-2>", "--x", "1,1,-1", "--h", "3,2,1"],
        &["chambers", "--lattice", "<2>+<-2>", "--radius", "10"],
        &["render", "--lattice", "U+<-2>", "--wall", "0,0,1", "--wall", "1,0,-1", "--wall", "0,1,-1"],
        &["catalog", "--name", "K3"],
    ];
    for args in examples {
        let argv = || std::iter::once("conelab").chain(args.iter().copied());
        let (a, b) = (run(argv()), run(argv()));
        check(a.code == 0, || format!("{args:?} exited {}: {}", a.code, a.stderr))?;
        check(a == b, || format!("{args:?} differs between runs"))?;
    }
    let mut scene = Scene::new(get_lattice("U+<-2>").unwrap(), 200.0).unwrap();
    for w in [[0, 0, 1], [1, 0, -1], [0, 1, -1]] {
        scene.add_wall(LatVec::from(w)).unwrap();
    }
    let svg = render_svg(&scene);
    let paths = svg.matches("<path").count();
    check(paths == 3, || format!("{paths} path elements"))?;
    check(svg == render_svg(&scene), || "render differs".into())?;
    Ok(format!("{} subcommands byte-identical; 3-wall scene has {paths} paths", examples.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 reflection algebra", reflection_algebra),
        ("2 nef walk descent", nef_walk_descent),
        ("3 separating-wall completeness", separating_completeness),
        ("4 Meyer desk check", meyer_desk_check),
        ("5 cusp classification", cusp_classification),
        ("6 finiteness illustration", finiteness_illustration),
        ("7 hyperbolic metric", hyperbolic_metric),
        ("8 end-to-end pipeline", isotropic_to_nef_pipeline),
        ("9 CLI/render determinism", cli_determinism),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("[PASS] {name} ({:.2?}): {detail}", t.elapsed()),
            Err(why) => {
                println!("[FAIL] {name} ({:.2?}): {why}", t.elapsed());
                failed.push(name);
            }
        }
    }
    let total = start.elapsed();
    let within = total < Duration::from_secs(60);
    println!("[{}] total runtime {total:.2?} (limit 60 s)", if within { "PASS" } else { "FAIL" });
    if !failed.is_empty() || !within {
        eprintln!("acceptance failed: {failed:?}");
        std::process::exit(1);
    }
}
