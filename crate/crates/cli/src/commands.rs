use crate::report::{compute, read, status_of, usage, write, CliError, Report, Sink};
use crate::{
    BaseArg, Cli, Cmd, CohomCmd, FamilyArg, FieldCmd, FieldSel, GroupCmd, GroupSel, J90Cmd,
    ModuleCmd, ModuleSel, PadicCmd, SsCmd, SubgroupKind, SuiteArgs,
};
use gf2core::BitVec;
use rayon::prelude::*;
use serde_json::{json, Value};
use wgroups::cohomres::{
    einfty11, minimal_resolution, poly_mul, poly_pow, restriction_ranks, verify_rational_series,
    CentralExtension, CohomError,
};
use wgroups::group2::{
    build_family, build_x2, sphere_action_check, Family, FiniteGroup, KernelSpec, PcGroup,
};
use wgroups::lhs::{build_E2_V2, build_E2_X2, d2_contraction, SpectralGrid};
use wgroups::modrep::{GModule, KleinLabel};
use wgroups::padic::{
    build_tower, demuskin_formula_layers, hilbert_symbol, norm_lemma_check, socle_by_norms,
    symbol_field, Base, PadicNumber, TowerField,
};
use wgroups::qsymbols::{
    build_j_from_vgroup, is_c_field, j90_check, kummer_compat_check, w_extension, SymbolField,
};
use wgroups::suite::{self, Status, SuiteOptions, V2_BETTI};

pub fn run(cli: &Cli, sink: &mut Sink) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Group(c) => group(c, sink),
        Cmd::Module(c) => module(c, sink),
        Cmd::Cohom(c) => cohom(cli, c, sink),
        Cmd::Ss(c) => ss(c, sink),
        Cmd::Field(c) => field(c, sink),
        Cmd::J90(c) => j90(c, sink),
        Cmd::Padic(c) => padic(cli, c, sink),
        Cmd::Suite(a) => run_suite(cli, a, sink),
    }
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::E => Family::E,
        FamilyArg::W => Family::W,
        FamilyArg::V => Family::V,
    }
}

fn sel_inputs(sel: &GroupSel) -> Value {
    match (&sel.family, &sel.group) {
        (_, Some(path)) => json!({"group": path, "tail": sel.tail}),
        (Some(f), None) => json!({"family": format!("{:?}", f), "n": sel.n}),
        (None, None) => json!({}),
    }
}

/// The group and the rank of its elementary abelian quotient.
fn load_group(sel: &GroupSel) -> Result<(PcGroup, usize), CliError> {
    if let Some(path) = &sel.group {
        let name = path
            .file_stem()
            .map_or("G".into(), |s| s.to_string_lossy().to_string());
        let g = PcGroup::parse(&name, &read(path)?).map_err(|e| usage(e.to_string()))?;
        let n = sel.tail.unwrap_or(g.num_gens());
        if n > g.num_gens() {
            return Err(usage(format!(
                "--tail {n} exceeds {} generators",
                g.num_gens()
            )));
        }
        return Ok((g, n));
    }
    let f = sel
        .family
        .ok_or_else(|| usage("give --family or --group"))?;
    let g = build_family(family(f), sel.n).map_err(|e| usage(e.to_string()))?;
    Ok((g, sel.n))
}

fn order_json(g: &PcGroup) -> Value {
    let o = g.order();
    u64::try_from(o).map_or_else(|_| json!(o.to_string()), |v| json!(v))
}

fn finite(g: &PcGroup) -> Result<FiniteGroup, CliError> {
    g.to_finite().map_err(compute)
}

fn group(c: &GroupCmd, sink: &mut Sink) -> Result<(), CliError> {
    match c {
        GroupCmd::Build { sel, save } => {
            let (g, n) = load_group(sel)?;
            g.verify_consistency().map_err(compute)?;
            let text = g.to_text();
            if let Some(path) = save {
                write(path, &text)?;
            }
            let kernel_rank = g
                .extension_data(KernelSpec::Tail(n))
                .map(|e| e.kernel_rank)
                .ok();
            let mut results = json!({
                "name": g.name(),
                "generators": g.num_gens(),
                "order": order_json(&g),
                "quotient_rank": n,
                "kernel_rank": kernel_rank,
                "presentation": text,
            });
            if g.num_gens() <= 12 {
                let fg = finite(&g)?;
                results["involutions"] = json!(fg.involutions().len());
            }
            sink.emit(
                &Report::new("group build", sel_inputs(sel), results, Status::Pass).criteria(&[14]),
            )
        }
        GroupCmd::Identities { sel } => {
            let (g, _) = load_group(sel)?;
            let rep = finite(&g)?
                .verify_metabelian_identities()
                .map_err(compute)?;
            let order = u64::try_from(g.order()).unwrap_or(u64::MAX);
            let ok = rep.ok() && rep.triples_checked == order.pow(3);
            let results = serde_json::to_value(&rep).map_err(compute)?;
            sink.emit(
                &Report::new("group identities", sel_inputs(sel), results, status_of(ok))
                    .criteria(&[11]),
            )
        }
        GroupCmd::Sphere => {
            let rep = sphere_action_check(2).map_err(compute)?;
            let ok = rep.ok();
            let results = serde_json::to_value(&rep).map_err(compute)?;
            sink.emit(
                &Report::new("group sphere", json!({"n": 2}), results, status_of(ok))
                    .criteria(&[12]),
            )
        }
    }
}

fn load_module(sel: &ModuleSel) -> Result<GModule, CliError> {
    let m = match (&sel.input, sel.trivial) {
        (Some(path), _) => GModule::parse(&read(path)?).map_err(|e| usage(e.to_string()))?,
        (None, Some(n)) => GModule::trivial(n),
        (None, None) => return Err(usage("give --in or --trivial")),
    };
    m.heller(sel.shift).map_err(compute)
}

fn module_inputs(sel: &ModuleSel) -> Value {
    json!({"in": sel.input, "trivial": sel.trivial, "shift": sel.shift})
}

fn module(c: &ModuleCmd, sink: &mut Sink) -> Result<(), CliError> {
    match c {
        ModuleCmd::Socle { sel } => {
            let m = load_module(sel)?;
            let s = m.socle_series();
            let results = json!({
                "dim": m.dim(),
                "group_rank": m.group_rank(),
                "layers": s.layer_dims(),
                "length": s.length(),
                "radical_layers": m.radical_layers(),
            });
            sink.emit(
                &Report::new("module socle", module_inputs(sel), results, Status::Pass)
                    .criteria(&[14]),
            )
        }
        ModuleCmd::Heller { sel, k, save } => {
            let m = load_module(sel)?;
            let h = m.heller(*k).map_err(compute)?;
            if let Some(path) = save {
                write(path, &h.to_text())?;
            }
            let mut inputs = module_inputs(sel);
            inputs["k"] = json!(k);
            let results = json!({
                "dim": h.dim(),
                "socle_layers": h.socle_series().layer_dims(),
            });
            sink.emit(&Report::new("module heller", inputs, results, Status::Pass))
        }
        ModuleCmd::Decompose { sel } => {
            let m = load_module(sel)?;
            let d = m.decompose_klein4().map_err(compute)?;
            let counts: serde_json::Map<String, Value> = d
                .counts
                .iter()
                .map(|(l, c)| (l.to_string(), json!(c)))
                .collect();
            let results = json!({
                "dim": m.dim(),
                "decomposition": d.to_string(),
                "counts": counts,
                "P_copies": d.p_sum_count(),
                "free": d.count(KleinLabel::Free),
            });
            sink.emit(
                &Report::new(
                    "module decompose",
                    module_inputs(sel),
                    results,
                    Status::Pass,
                )
                .criteria(&[4, 5]),
            )
        }
    }
}

fn cohom_status(e: &CohomError) -> Option<Status> {
    matches!(e, CohomError::ResourceCap(_)).then_some(Status::Undecided)
}

fn central(sel: &GroupSel) -> Result<CentralExtension, CliError> {
    let (g, n) = load_group(sel)?;
    let ext = g.extension_data(KernelSpec::Tail(n)).map_err(compute)?;
    CentralExtension::from_extension_data(&ext).map_err(compute)
}

fn cohom(cli: &Cli, c: &CohomCmd, sink: &mut Sink) -> Result<(), CliError> {
    match c {
        CohomCmd::Betti { sel } => {
            let degree = cli.max_degree.unwrap_or(8);
            let (g, _) = load_group(sel)?;
            let mut inputs = sel_inputs(sel);
            inputs["max_degree"] = json!(degree);
            let is_v2 = sel.family == Some(FamilyArg::V) && sel.n == 2 && sel.group.is_none();
            let res = match minimal_resolution(&finite(&g)?, degree) {
                Ok(r) => r,
                Err(e) => {
                    let Some(status) = cohom_status(&e) else {
                        return Err(compute(e));
                    };
                    let results = json!({"error": e.to_string()});
                    return sink.emit(&Report::new("cohom betti", inputs, results, status));
                }
            };
            let ranks: Vec<u64> = res.ranks.iter().map(|&r| r as u64).collect();
            let (verified, status) = if is_v2 {
                let den = poly_mul(&poly_pow(&[1, -1], 3), &poly_pow(&[1, 0, -1], 2));
                let ok = verify_rational_series(&ranks, &[1, -1, 1], &den)
                    && ranks[..] == V2_BETTI[..ranks.len().min(V2_BETTI.len())];
                (Some(ok), status_of(ok))
            } else {
                (None, Status::Pass)
            };
            let checks = res.verify();
            let status = if checks.minimal && checks.composite_zero {
                status
            } else {
                Status::Fail
            };
            let results = json!({
                "ranks": ranks,
                "series_verified": verified,
                "minimal": checks.minimal,
                "boundaries_compose_to_zero": checks.composite_zero,
            });
            let r = Report::new("cohom betti", inputs, results, status);
            sink.emit(&if is_v2 { r.criteria(&[1, 2]) } else { r })
        }
        CohomCmd::Einfty11 { sel, field } => {
            let (ext, inputs) = match field {
                Some(path) => {
                    let f = load_field(path)?;
                    (
                        w_extension(&f).map_err(compute)?.ext,
                        json!({"field": path}),
                    )
                }
                None => (central(sel)?, sel_inputs(sel)),
            };
            let e = einfty11(&ext);
            let results = json!({
                "dim": e.dim,
                "source_dim": e.source_dim,
                "target_dim": e.target_dim,
                "rank": e.rank,
                "surjective": e.surjective(),
            });
            sink.emit(&Report::new("cohom einfty11", inputs, results, Status::Pass).criteria(&[6]))
        }
        CohomCmd::Restrict {
            sel,
            kind,
            subgroups,
            degree,
        } => {
            let (g, _) = load_group(sel)?;
            let fg = finite(&g)?;
            let subs = match subgroups {
                Some(path) => parse_subgroups(&fg, &read(path)?)?,
                None => match kind {
                    SubgroupKind::Abelian => fg.maximal_abelian_subgroups(),
                    SubgroupKind::Elementary => fg.maximal_elementary_abelian_subgroups(),
                },
            };
            let mut inputs = sel_inputs(sel);
            inputs["degree"] = json!(degree);
            inputs["subgroups"] = match subgroups {
                Some(p) => json!(p),
                None => json!(format!("{kind:?}").to_lowercase()),
            };
            let orders: Vec<usize> = subs.iter().map(|h| h.order()).collect();
            match restriction_ranks(&fg, &subs, *degree) {
                Ok(ranks) => {
                    let injective: Vec<bool> = ranks.iter().map(|r| r.injective()).collect();
                    let results = json!({
                        "subgroup_orders": orders,
                        "ranks": ranks,
                        "injective": injective,
                        "first_deficient_degree": ranks.iter().find(|r| !r.injective()).map(|r| r.degree),
                    });
                    sink.emit(
                        &Report::new("cohom restrict", inputs, results, Status::Pass)
                            .criteria(&[13]),
                    )
                }
                Err(e) => {
                    let Some(status) = cohom_status(&e) else {
                        return Err(compute(e));
                    };
                    let results = json!({"subgroup_orders": orders, "error": e.to_string()});
                    sink.emit(
                        &Report::new("cohom restrict", inputs, results, status).criteria(&[13]),
                    )
                }
            }
        }
    }
}

/// One subgroup per line, given by generating element codes.
fn parse_subgroups(
    g: &FiniteGroup,
    text: &str,
) -> Result<Vec<wgroups::group2::Subgroup>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let gens = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(x) if x < g.order() => Ok(x),
                _ => Err(usage(format!(
                    "subgroups line {}: bad element {t:?}",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(g.closure(&gens));
    }
    if out.is_empty() {
        return Err(usage("no subgroups given"));
    }
    Ok(out)
}

fn grid_report(command: &str, inputs: Value, g: &SpectralGrid, page: usize) -> Report {
    let results = json!({
        "page": page,
        "entries": g.entries(page),
        "rows": g.row_decompositions,
    });
    Report::new(command, inputs, results, Status::Pass)
}

fn ss(c: &SsCmd, sink: &mut Sink) -> Result<(), CliError> {
    let (command, inputs, grid, criteria): (&str, Value, SpectralGrid, &[u8]) = match c {
        SsCmd::X2 { pmax } => {
            let x = build_x2().map_err(compute)?;
            let g = build_E2_X2(&x, *pmax).map_err(|e| usage(e.to_string()))?;
            ("ss x2", json!({"pmax": pmax}), g, &[3, 4])
        }
        SsCmd::V2 { pmax, qmax } => {
            let v = build_family(Family::V, 2)
                .and_then(|g| g.extension_data(KernelSpec::Tail(2)))
                .map_err(compute)?;
            let g = build_E2_V2(&v, *pmax, *qmax).map_err(|e| usage(e.to_string()))?;
            ("ss v2", json!({"pmax": pmax, "qmax": qmax}), g, &[5])
        }
    };
    sink.emit(&grid_report(command, inputs.clone(), &grid, 2).criteria(criteria))?;
    match d2_contraction(&grid) {
        Ok(g3) => sink.emit(&grid_report(command, inputs, &g3, 3).criteria(criteria)),
        Err(e) => {
            let results = json!({"page": 3, "error": e.to_string()});
            sink.emit(&Report::new(command, inputs, results, Status::Fail).criteria(criteria))
        }
    }
}

fn base(b: BaseArg, p: u64) -> Base {
    match b {
        BaseArg::Q2 => Base::Q2,
        BaseArg::Qp => Base::Qp(p),
    }
}

fn load_field(path: &std::path::Path) -> Result<SymbolField, CliError> {
    let name = path
        .file_stem()
        .map_or("F".into(), |s| s.to_string_lossy().to_string());
    SymbolField::parse(&name, &read(path)?).map_err(|e| usage(e.to_string()))
}

fn field(c: &FieldCmd, sink: &mut Sink) -> Result<(), CliError> {
    let FieldCmd::Cfield { sel } = c;
    let f = field_of(sel)?;
    let cf = is_c_field(&f).map_err(compute)?;
    let e = einfty11(&w_extension(&f).map_err(compute)?.ext);
    let consistent = cf.is_c_field == (e.dim == 0);
    let results = json!({
        "n": f.n,
        "is_c_field": cf.is_c_field,
        "witness": cf.witness,
        "einfty11_dim": e.dim,
        "consistent_with_einfty11": consistent,
    });
    let inputs = json!({"in": sel.input, "base": sel.base.map(|b| format!("{b:?}")), "p": sel.p});
    sink.emit(
        &Report::new("field cfield", inputs, results, status_of(consistent)).criteria(&[6, 8]),
    )
}

fn field_of(sel: &FieldSel) -> Result<SymbolField, CliError> {
    match (&sel.input, sel.base) {
        (Some(path), _) => load_field(path),
        (None, Some(b)) => symbol_field(base(b, sel.p)).map_err(|e| usage(e.to_string())),
        (None, None) => Err(usage("give --in or --base")),
    }
}

/// Lines `i bits`: generator index (1-based) and its value in J.
fn parse_assignment(text: &str, n: usize, dim: usize) -> Result<Vec<(usize, BitVec)>, CliError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| usage(format!("assignment line {}: {what}", ln + 1));
        let (i, bits) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected `i bits`"))?;
        let i: usize = i.parse().map_err(|_| bad("bad index"))?;
        if i == 0 || i > n {
            return Err(bad("index out of range"));
        }
        let v = BitVec::parse(bits.trim()).map_err(|e| bad(&e.to_string()))?;
        if v.len() != dim {
            return Err(bad(&format!("expected {dim} bits")));
        }
        out.push((i - 1, v));
    }
    Ok(out)
}

fn j90(c: &J90Cmd, sink: &mut Sink) -> Result<(), CliError> {
    match c {
        J90Cmd::Verify { sel, assignment } => {
            let (g, n) = load_group(sel)?;
            let jd = build_j_from_vgroup(&g, n).map_err(compute)?;
            let asg = parse_assignment(&read(assignment)?, n, jd.dim())?;
            let out = j90_check(&jd, &asg).map_err(compute)?;
            let consistent = out.consistent();
            let mut inputs = sel_inputs(sel);
            inputs["assignment"] = json!(assignment);
            let mut results = serde_json::to_value(&out).map_err(compute)?;
            results["labels"] = json!(jd.labels);
            results["consistent"] = json!(consistent);
            sink.emit(
                &Report::new("j90 verify", inputs, results, status_of(consistent)).criteria(&[7]),
            )
        }
        J90Cmd::Exhaustive => {
            let r = suite::run_criterion(7, &SuiteOptions::default()).expect("criterion 7");
            emit_criterion(sink, "j90 exhaustive", json!({"n": 2}), r)
        }
        J90Cmd::Kummer { sel } => {
            let (g, n) = load_group(sel)?;
            let jd = build_j_from_vgroup(&g, n).map_err(compute)?;
            let k = kummer_compat_check(&jd).map_err(compute)?;
            let ok = k.ok();
            let results = serde_json::to_value(&k).map_err(compute)?;
            sink.emit(
                &Report::new("j90 kummer", sel_inputs(sel), results, status_of(ok)).criteria(&[11]),
            )
        }
    }
}

fn tower(cli: &Cli, b: Base) -> Result<TowerField, CliError> {
    let prec = cli.precision.unwrap_or(match b {
        Base::Q2 => 32,
        Base::Qp(_) => 10,
    });
    let n = b.n();
    let classes: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
    build_tower(b, &classes, prec).map_err(|e| usage(e.to_string()))
}

fn padic(cli: &Cli, c: &PadicCmd, sink: &mut Sink) -> Result<(), CliError> {
    match c {
        PadicCmd::Socle { base: b, p } => {
            let b = base(*b, *p);
            b.validate().map_err(|e| usage(e.to_string()))?;
            let t = tower(cli, b)?;
            let s = socle_by_norms(&t).map_err(compute)?;
            let ok = s.agrees_with_galois;
            let results = serde_json::to_value(&s).map_err(compute)?;
            let inputs =
                json!({"base": format!("{b:?}"), "precision": t.digits, "degree": t.degree});
            let criteria: &[u8] = if b == Base::Q2 { &[9] } else { &[8] };
            sink.emit(
                &Report::new("padic socle", inputs, results, status_of(ok)).criteria(criteria),
            )
        }
        PadicCmd::Symbol { a, b, p } => {
            let prec = cli.precision.unwrap_or(if *p == 2 { 16 } else { 8 });
            let num = |x: i64| {
                PadicNumber::from_integer(*p, x as i128, prec).map_err(|e| usage(e.to_string()))
            };
            let h = hilbert_symbol(&num(*a)?, &num(*b)?).map_err(compute)?;
            let results = json!({"symbol": if h { -1 } else { 1 }});
            sink.emit(&Report::new(
                "padic symbol",
                json!({"a": a, "b": b, "p": p}),
                results,
                Status::Pass,
            ))
        }
        PadicCmd::Norms {
            base: b,
            p,
            samples,
        } => {
            let b = base(*b, *p);
            b.validate().map_err(|e| usage(e.to_string()))?;
            let t = tower(cli, b)?;
            let r = norm_lemma_check(&t, *samples, cli.seed).map_err(compute)?;
            let ok = r.ok();
            let results = serde_json::to_value(&r).map_err(compute)?;
            let inputs = json!({"base": format!("{b:?}"), "samples": samples, "seed": cli.seed});
            sink.emit(&Report::new("padic norms", inputs, results, status_of(ok)).criteria(&[9]))
        }
        PadicCmd::Formula { n } => {
            if *n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            let f = demuskin_formula_layers(*n);
            let results = serde_json::to_value(&f).map_err(compute)?;
            sink.emit(
                &Report::new("padic formula", json!({"n": n}), results, Status::Pass)
                    .criteria(&[10]),
            )
        }
    }
}

fn emit_criterion(
    sink: &mut Sink,
    command: &str,
    inputs: Value,
    r: suite::CriterionReport,
) -> Result<(), CliError> {
    let status = r.status;
    let id = r.id;
    let results = serde_json::to_value(&r).map_err(compute)?;
    sink.emit(&Report::new(command, inputs, results, status).criteria(&[id]))
}

fn run_suite(cli: &Cli, a: &SuiteArgs, sink: &mut Sink) -> Result<(), CliError> {
    let ids: Vec<u8> = if a.criterion.is_empty() {
        suite::CRITERIA.iter().map(|(i, _)| *i).collect()
    } else {
        a.criterion.clone()
    };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=14).contains(&i)) {
        return Err(usage(format!("no criterion {bad}")));
    }
    let opts = SuiteOptions {
        full: a.full,
        precision: cli.precision.unwrap_or(32),
        max_degree: cli.max_degree,
        seed: cli.seed,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
        .map_err(compute)?;
    let reports: Vec<_> = pool.install(|| {
        ids.par_iter()
            .map(|&i| suite::run_criterion(i, &opts).expect("known criterion"))
            .collect()
    });
    let inputs = json!({"full": opts.full, "precision": opts.precision, "max_degree": opts.max_degree, "seed": opts.seed});
    let mut summary = serde_json::Map::new();
    for r in reports {
        summary.insert(r.id.to_string(), json!(r.status));
        emit_criterion(sink, "suite", inputs.clone(), r)?;
    }
    let count = |s: Status| summary.values().filter(|v| **v == json!(s)).count();
    let worst = if count(Status::Fail) > 0 {
        Status::Fail
    } else if count(Status::Undecided) > 0 {
        Status::Undecided
    } else {
        Status::Pass
    };
    let results = json!({
        "pass": count(Status::Pass),
        "fail": count(Status::Fail),
        "undecided": count(Status::Undecided),
        "statuses": summary,
    });
    let mut r = Report::new("suite summary", inputs, results, worst);
    r.provenance = ids.iter().map(|i| format!("criterion:{i}")).collect();
    sink.emit(&r)
}
