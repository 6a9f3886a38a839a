//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::time::Instant;

use common::*;
use dimres::ed::{search_max_ed, EdBudget};
use dimres::gqd::{gqd, monogamy_check, polygamy_witness};
use dimres::measures::*;
use dimres::partition::{labels, Partition};
use dimres::qcore::*;
use dimres::states::*;
use dimres::thermo::{classical_work, extractable_work, search_min_extension, work_ledger, ExtensionBudget};
use dimres::Result;
use rand::Rng;

type Outcome = Result<(bool, String)>;

fn ab_cut() -> Partition {
    Partition::cut(&[labels::A, labels::ABAR], &[labels::B, labels::BBAR]).unwrap()
}

fn reduction(ext: &DensityMatrix) -> Result<DensityMatrix> {
    partial_trace(ext, &[labels::ABAR, labels::BBAR])
}

fn table2() -> Outcome {
    let rho = build_rho_rsp();
    let expected = [(RspVariant::Six, 36, 12f64.log2()), (RspVariant::Eight, 64, 4.0), (RspVariant::Opt, 16, 2.0)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (v, dim, work) in expected {
        let ext = build_rsp_extension(v).state;
        let w = extractable_work(&ext)?;
        let red = max_abs_diff(reduction(&ext)?.matrix(), rho.matrix());
        let classical = is_classical(&ext, &ab_cut(), None)?.classical;
        ok &= ext.dim() == dim && (w - work).abs() <= 0.005 && red <= 1e-10 && classical;
        detail.push(format!("{v}: dim {} W {w:.4} red {red:.1e} classical {classical}", ext.dim()));
    }
    Ok((ok, detail.join("; ")))
}

fn work_identity_suite() -> Outcome {
    let mut r = rng(2);
    let (mut worst_res, mut worst_slack) = (0.0f64, f64::INFINITY);
    for _ in 0..100 {
        let dec = random_decomposition(&mut r, 3, 5);
        let ext = li_luo_extend_with_witness(&dec, &FlagSplit::BothSides)?;
        let ledger = work_ledger(&ext.state)?;
        let wc = classical_work(&ext.state, &ext.witness.basis_a, &ab_cut())?;
        worst_res = worst_res.max(ledger.identity_residual);
        worst_slack = worst_slack.min(wc - ledger.w_reduced - ledger.w_aux);
    }
    let ok = worst_res <= 1e-10 && worst_slack >= -1e-10;
    Ok((ok, format!("max residual {worst_res:.1e}, min slack {worst_slack:.3e}")))
}

fn extension_roundtrip_suite() -> Outcome {
    let mut r = rng(3);
    let budget = OptBudget::default().with_restarts(1).with_dim_cap(64);
    let cut_ab = Partition::cut(&[labels::A, labels::ABAR], &[labels::B, labels::BBAR])?;
    let (mut red, mut deph, mut g) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let dec = random_decomposition(&mut r, 3, 4);
        let ext = li_luo_extend_with_witness(&dec, &FlagSplit::BothSides)?;
        red = red.max(max_abs_diff(reduction(&ext.state)?.matrix(), assemble_separable(&dec)?.matrix()));
        let hint = (&ext.witness.basis_a, &ext.witness.basis_b);
        deph = deph.max(is_classical(&ext.state, &cut_ab, Some(hint))?.residual);
        g = g.max(gqd(&ext.state, &cut_ab, &budget)?.value);
    }
    let ok = red <= 1e-12 && deph <= 1e-10 && g <= 1e-6;
    Ok((ok, format!("max reduction err {red:.1e}, max dephasing residual {deph:.1e}, max GQD {g:.1e}")))
}

/// `(I + x·σ ⊗ I + I ⊗ y·σ + t (n·σ) ⊗ (m·σ)) / 4`, positive when the
/// coefficient norms sum to at most one.
fn rank_one_t_state(r: &mut impl Rng) -> DensityMatrix {
    let unit = |r: &mut dyn rand::RngCore| {
        let v: [f64; 3] = std::array::from_fn(|_| r.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-9);
        v.map(|c| c / n)
    };
    let (nx, ny, nn, nm) = (unit(r), unit(r), unit(r), unit(r));
    let w: [f64; 3] = std::array::from_fn(|_| r.random_range(0.0..0.33));
    let dot = |v: [f64; 3]| pauli(1).scale(v[0]) + pauli(2).scale(v[1]) + pauli(3).scale(v[2]);
    let id = ComplexMatrix::identity(2, 2);
    let m = ComplexMatrix::identity(4, 4)
        + dot(nx).kronecker(&id).scale(w[0])
        + id.kronecker(&dot(ny)).scale(w[1])
        + dot(nn).kronecker(&dot(nm)).scale(w[2]);
    DensityMatrix::new(layout(&[("a", 2), ("b", 2)]), m.unscale(4.0)).unwrap()
}

fn rsp_block() -> Outcome {
    let rho = build_rho_rsp();
    let gd = geometric_discord(&rho)?;
    let numeric = geometric_discord_numeric(&rho);
    let payoff = rsp_payoff(&rho)?;
    let mut ext_gap = 0.0f64;
    for v in RspVariant::ALL {
        ext_gap = ext_gap.max((rsp_payoff(&reduction(&build_rsp_extension(v).state)?)? - payoff).abs());
    }
    let mut r = rng(4);
    let mut rank_one = 0.0f64;
    for _ in 0..100 {
        rank_one = rank_one.max(rsp_payoff(&rank_one_t_state(&mut r))?);
    }
    let mut probe = 0.0f64;
    let two = layout(&[("a", 2), ("b", 2)]);
    for _ in 0..10_000 {
        let n = r.random_range(1..=4);
        probe = probe.max(geometric_discord(&assemble_separable(&random_separable(&two, n, &mut r)?)?)?);
    }
    let ok = (gd - 0.0625).abs() <= 1e-6
        && (numeric - gd).abs() <= 1e-4
        && payoff == gd
        && ext_gap <= 1e-10
        && rank_one <= 1e-12
        && probe <= 0.0625 + 1e-4;
    Ok((
        ok,
        format!(
            "GD {gd:.6}, numeric {numeric:.6}, payoff {payoff:.6}, extension gap {ext_gap:.1e}, \
             rank-1 T payoff {rank_one:.1e}, probe max GD {probe:.4}"
        ),
    ))
}

fn table1_search() -> Outcome {
    let budget = EdBudget::default();
    let mut rows = Vec::new();
    for seed in 0..5u64 {
        let mut row = Vec::new();
        for d in 2..=4 {
            row.push(search_max_ed(d, &budget, seed)?.best_ed);
        }
        rows.push(row);
    }
    let d2_ok = rows.iter().all(|r| (0.085..=0.097).contains(&r[0]));
    let d3_ok = rows.iter().all(|r| r[1] >= 0.115);
    let increasing = rows.iter().filter(|r| r[0] < r[1] && r[1] < r[2]).count();
    let fmt = rows
        .iter()
        .enumerate()
        .map(|(s, r)| format!("seed {s}: {:.4}/{:.4}/{:.4}", r[0], r[1], r[2]))
        .collect::<Vec<_>>()
        .join("; ");
    Ok((d2_ok && d3_ok && increasing >= 4, format!("d=2/3/4 {fmt}; increasing in {increasing}/5")))
}

fn negativity_block() -> Outcome {
    let mut r = rng(6);
    let mut gap = 0.0f64;
    for i in 0..100 {
        let (da, db) = (r.random_range(2..=3), r.random_range(2..=3));
        let l = layout(&[("a", da), ("b", db)]);
        let s = if i % 2 == 0 { random_mixed_state(l, &mut r)? } else { random_pure_state(l, &mut r)? };
        let cut = Partition::cut(&["a"], &["b"])?;
        gap = gap.max((negativity(&s, &cut)? - negativity_trace_norm(&s, &cut)?).abs());
    }
    let ab = Partition::cut(&["A"], &["B"])?;
    let bell_n = negativity(&bell(), &Partition::cut(&["a"], &["b"])?)?;
    let mut classical = 0.0f64;
    for _ in 0..100 {
        let (da, db) = (r.random_range(2..=4), r.random_range(2..=4));
        let n = da.min(db);
        let ua = random_unitary(da, &mut r)?.columns(0, n).into_owned();
        let ub = random_unitary(db, &mut r)?.columns(0, n).into_owned();
        let spec = ClassicalStateSpec::new(random_simplex(n, &mut r), ua, ub)?;
        classical = classical.max(negativity(&build_classical(&spec)?, &ab)?);
    }
    let ok = gap <= 1e-12 && (bell_n - 0.5).abs() <= 1e-10 && classical <= 1e-10;
    Ok((ok, format!("max convention gap {gap:.1e}, Bell {bell_n:.12}, max classical {classical:.1e}")))
}

fn monogamy_block() -> Outcome {
    use labels::*;
    let budget = OptBudget::default();
    let opt = build_rsp_extension(RspVariant::Opt).state;
    let mono = monogamy_check(&opt, &Partition::new(&[&[A][..], &[ABAR], &[B, BBAR]])?, &budget)?;
    let last = mono.rhs_terms.last().map_or(f64::NAN, |t| t.value);
    let poly = polygamy_witness(&build_rsp_extension(RspVariant::Six).state, &budget)?;
    let ok = mono.slack >= -1e-4 && last <= 1e-6 && poly.delta_ab_aux <= 1e-6 && poly.delta_a_aux > 0.01;
    Ok((
        ok,
        format!(
            "opt a|abar|B slack {:.4} (lhs {:.4}, last term {last:.1e}); six delta ab|aux {:.1e}, a|aux {:.4}",
            mono.slack, mono.lhs, poly.delta_ab_aux, poly.delta_a_aux
        ),
    ))
}

fn min_extension_search() -> Outcome {
    let rho = build_rho_rsp();
    let random = search_min_extension(&rho, &[(4, 4)], &[], &ExtensionBudget::default())?;
    let best_random = random.attempts[0].best_distance;
    let seed = build_rsp_extension(RspVariant::Opt).witness;
    let seeded = search_min_extension(&rho, &[(4, 4)], &[seed], &ExtensionBudget { restarts: 0, ..Default::default() })?;
    let best_seeded = seeded.attempts[0].best_distance;
    let work = seeded.work.unwrap_or(f64::NAN);
    let ok = best_random < 1e-4 && best_seeded < 1e-10 && (work - 2.0).abs() <= 1e-6;
    Ok((
        ok,
        format!(
            "200 random starts: best {best_random:.1e}; seeded: {best_seeded:.1e}, work {work:.6}"
        ),
    ))
}

/// Larger dimensions, reported only.
fn table1_best_effort() -> String {
    let budget = EdBudget { samples: 5_000, ..EdBudget::default() };
    (5..=6)
        .map(|d| match search_max_ed(d, &budget, 0) {
            Ok(rep) => format!("d={d}: {:.4}", rep.best_ed),
            Err(e) => format!("d={d}: error {e}"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("table2 extractable work", table2),
        ("work identity and inequality", work_identity_suite),
        ("classical extension roundtrip", extension_roundtrip_suite),
        ("remote state preparation and geometric discord", rsp_block),
        ("table1 entanglement distribution search", table1_search),
        ("negativity conventions", negativity_block),
        ("monogamy and polygamy", monogamy_block),
        ("minimal extension search", min_extension_search),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(out) => out,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} [{id}] {name} ({:.1} s): {detail}", start.elapsed().as_secs_f64());
    }
    if filter.is_empty() || filter.iter().any(|f| f == "5") {
        let start = Instant::now();
        println!("INFO [5] best effort, 5000 samples, seed 0: {} ({:.1} s)", table1_best_effort(), start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
