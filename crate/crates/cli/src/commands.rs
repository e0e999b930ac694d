use std::io::Write;
use std::process::ExitCode;

use marcumq::asymptotics::{marcum_asym, nuttall_norm_asym, nuttall_std_asym};
use marcumq::bounds::{
    marcum_bound, nuttall_norm_bound, nuttall_std_bound, select_marcum_bounds, select_nuttall_bounds, BoundKind,
    BoundReport, NuttallBracket, OrderBracket, Target as BoundTarget,
};
use marcumq::closed_form::{marcum_half_odd, nuttall_half_odd, nuttall_norm_half_odd, HalfOddOrder, NuttallHalfOddOrders};
use marcumq::harness::{
    run_theorem_suite, scan_conjectures, Axis, GridSpec, Params, PropertyVerdict, Transform, DEFAULT_TOL,
};
use marcumq::moment::{truncated_moment, truncated_moment_quad, ScaledChiSquare};
use marcumq::oracle::ln_pdf_noncentral_chisq;
use marcumq::quad::QuadConfig;
use marcumq::{Eval, MarcumArgs, NuttallArgs, Oracle};
use rayon::prelude::*;

use crate::output::{metadata, num, opt, short, Table};
use crate::{Cli, Column, Command, Format, MomentArgs, PdfArgs, PdfMode, PointArgs, SweepArgs, SweepAxis, Target};

type CmdResult = Result<ExitCode, String>;

pub fn run(cli: &Cli) -> CmdResult {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol must be a positive number, got {t}"));
        }
    }
    match &cli.command {
        Command::Eval { target, point } => eval(cli, *target, point),
        Command::Bounds { target, point } => bounds(cli, *target, point),
        Command::Sweep(args) => sweep(cli, args),
        Command::Verify { conjectures, only } => verify(cli, *conjectures, only.as_deref()),
        Command::Pdfdump(args) => pdfdump(cli, args),
        Command::Moment(args) => moment(cli, args),
    }
}

fn oracle(cli: &Cli) -> Oracle {
    let mut cfg = QuadConfig::default();
    if let Some(t) = cli.tol {
        cfg.rel_tol = t;
    }
    Oracle::new(cfg)
}

fn emit(cli: &Cli, default: Format, meta: String, table: &Table) -> Result<(), String> {
    let text = match cli.format.unwrap_or(default) {
        Format::Csv => format!("{meta}\n{}", table.csv()),
        Format::Pretty => table.pretty(),
    };
    std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::Marcum => "marcum",
        Target::Nuttall => "nuttall",
        Target::NuttallNorm => "nuttall-norm",
    }
}

fn point_params(target: Target, p: &PointArgs) -> Result<Params, String> {
    match (target, p.mu) {
        (Target::Marcum, _) => Ok(Params::marcum(p.nu, p.a, p.b)),
        (_, Some(mu)) => Ok(Params::nuttall(mu, p.nu, p.a, p.b)),
        (_, None) => Err(format!("{} requires --mu", target_name(target))),
    }
}

fn point_meta(target: Target, p: Params) -> Vec<(&'static str, String)> {
    let mut v = vec![("target", target_name(target).to_string())];
    if target != Target::Marcum {
        v.push(("mu", p.mu.to_string()));
    }
    v.extend([("nu", p.nu.to_string()), ("a", p.a.to_string()), ("b", p.b.to_string())]);
    v
}

fn half_odd_nuttall(p: Params) -> Option<NuttallHalfOddOrders> {
    let both = HalfOddOrder::is_half_odd(p.mu) && HalfOddOrder::is_half_odd(p.nu);
    (both && p.mu >= p.nu).then(|| NuttallHalfOddOrders::new(p.mu, p.nu).ok()).flatten()
}

fn closed_form(target: Target, p: Params) -> marcumq::Result<Option<Eval>> {
    match target {
        Target::Marcum if HalfOddOrder::is_half_odd(p.nu) => {
            marcum_half_odd(HalfOddOrder::new(p.nu)?, p.a, p.b).map(Some)
        }
        Target::Nuttall | Target::NuttallNorm => match half_odd_nuttall(p) {
            Some(o) if target == Target::Nuttall => nuttall_half_odd(o, p.a, p.b).map(Some),
            Some(o) => nuttall_norm_half_odd(o, p.a, p.b).map(Some),
            None => Ok(None),
        },
        Target::Marcum => Ok(None),
    }
}

/// Closed form at half-odd orders unless `force_oracle`, quadrature otherwise.
fn evaluate(target: Target, p: Params, oracle: &Oracle, force_oracle: bool) -> marcumq::Result<Eval> {
    if !force_oracle {
        if let Some(e) = closed_form(target, p)? {
            return Ok(e);
        }
    }
    match target {
        Target::Marcum => oracle.marcum_q(MarcumArgs::new(p.nu, p.a, p.b)?),
        Target::Nuttall => oracle.nuttall_q(NuttallArgs::new(p.mu, p.nu, p.a, p.b)?),
        Target::NuttallNorm => oracle.nuttall_q_norm(NuttallArgs::new(p.mu, p.nu, p.a, p.b)?),
    }
}

fn eval(cli: &Cli, target: Target, point: &PointArgs) -> CmdResult {
    let p = point_params(target, point)?;
    let e = evaluate(target, p, &oracle(cli), cli.force_oracle).map_err(|e| e.to_string())?;
    let mut meta = point_meta(target, p);
    meta.push(("force_oracle", cli.force_oracle.to_string()));
    let meta = metadata("eval", &meta);
    let table = match cli.format.unwrap_or(Format::Pretty) {
        Format::Csv => {
            let mut t = Table::new(["value", "abs_error_estimate", "method"]);
            t.rows.push(vec![num(e.value), num(e.abs_error_estimate), e.method.to_string()]);
            t
        }
        Format::Pretty => {
            let mut t = Table::new(["target", target_name(target)]);
            for (k, v) in point_meta(target, p).into_iter().skip(1) {
                t.rows.push(vec![k.to_string(), v]);
            }
            t.rows.push(vec!["value".into(), num(e.value)]);
            t.rows.push(vec!["abs_error_estimate".into(), short(e.abs_error_estimate)]);
            t.rows.push(vec!["method".into(), e.method.to_string()]);
            t
        }
    };
    emit(cli, Format::Pretty, meta, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn unavailable(report: &BoundReport, kind: BoundKind, msg: &str) -> String {
    let (min, strict) = match report.target {
        BoundTarget::Marcum => kind.marcum_validity(),
        _ => (kind.nuttall_validity().unwrap_or(0.0), false),
    };
    let valid = if strict { report.nu > min } else { report.nu >= min };
    if valid {
        msg.to_string()
    } else {
        format!("n/a (validity: nu {} {min})", if strict { ">" } else { ">=" })
    }
}

fn bounds(cli: &Cli, target: Target, point: &PointArgs) -> CmdResult {
    let p = point_params(target, point)?;
    let o = oracle(cli);
    let report = match target {
        Target::Marcum => select_marcum_bounds(MarcumArgs::new(p.nu, p.a, p.b).map_err(|e| e.to_string())?, &o),
        Target::Nuttall | Target::NuttallNorm => {
            let args = NuttallArgs::new(p.mu, p.nu, p.a, p.b).map_err(|e| e.to_string())?;
            let bt = if target == Target::Nuttall { BoundTarget::NuttallStd } else { BoundTarget::NuttallNorm };
            select_nuttall_bounds(args, bt, &o)
        }
    }
    .map_err(|e| e.to_string())?;

    let mut t = Table::new(["bound", "value", "rel_error", "note"]);
    let exact_note = if report.exact_order {
        format!("{}; half-odd order, every bound is exact", report.exact.method)
    } else {
        report.exact.method.to_string()
    };
    t.rows.push(vec!["exact".into(), num(report.exact.value), String::new(), exact_note]);
    for e in &report.entries {
        let mut notes = Vec::new();
        if report.recommended_lower == Some(e.kind) || report.recommended_upper == Some(e.kind) {
            notes.push("recommended".to_string());
        }
        if report.tightest_lower == Some(e.kind) || report.tightest_upper == Some(e.kind) {
            notes.push("tightest".to_string());
        }
        if report.exact_order && e.value.is_ok() {
            notes.push("exact".to_string());
        }
        let value = match &e.value {
            Ok(v) => num(*v),
            Err(msg) => {
                notes.push(unavailable(&report, e.kind, msg));
                String::new()
            }
        };
        let value = if value.is_empty() && cli.format != Some(Format::Csv) { "n/a".into() } else { value };
        t.rows.push(vec![e.kind.to_string(), value, e.rel_error.map(short).unwrap_or_default(), notes.join("; ")]);
    }
    emit(cli, Format::Pretty, metadata("bounds", &point_meta(target, p)), &t)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep_axis(a: SweepAxis) -> Axis {
    match a {
        SweepAxis::Nu => Axis::Nu,
        SweepAxis::Mu => Axis::Mu,
        SweepAxis::A => Axis::A,
        SweepAxis::B => Axis::B,
    }
}

fn bound_kinds(target: Target) -> &'static [BoundKind] {
    match target {
        Target::Marcum => &BoundKind::MARCUM,
        _ => &BoundKind::NUTTALL,
    }
}

fn bound_value(target: Target, kind: BoundKind, p: Params) -> marcumq::Result<f64> {
    match target {
        Target::Marcum => marcum_bound(kind, &OrderBracket::new(p.nu)?, p.a, p.b),
        Target::Nuttall => nuttall_std_bound(kind, &NuttallBracket::new(p.mu, p.nu)?, p.a, p.b),
        Target::NuttallNorm => nuttall_norm_bound(kind, &NuttallBracket::new(p.mu, p.nu)?, p.a, p.b),
    }
}

fn asym_value(target: Target, p: Params) -> marcumq::Result<f64> {
    match target {
        Target::Marcum => marcum_asym(MarcumArgs::new(p.nu, p.a, p.b)?),
        Target::Nuttall => nuttall_std_asym(NuttallArgs::new(p.mu, p.nu, p.a, p.b)?),
        Target::NuttallNorm => nuttall_norm_asym(NuttallArgs::new(p.mu, p.nu, p.a, p.b)?),
    }
}

/// One evaluated grid point: a cell per column, with the reason for each empty cell.
struct Row {
    cells: Vec<Result<f64, String>>,
}

struct Layout {
    names: Vec<String>,
    exact: bool,
    closed: bool,
    bounds: bool,
    asym: bool,
    errors: bool,
}

impl Layout {
    fn new(args: &SweepArgs) -> Self {
        let has = |c| args.columns.contains(&c);
        let errors = has(Column::Errors) || args.max_errors;
        let mut l = Layout {
            names: Vec::new(),
            exact: has(Column::Exact) || errors,
            closed: has(Column::ClosedForm),
            bounds: has(Column::Bounds) || errors,
            asym: has(Column::Asym) || errors,
            errors,
        };
        let mut names: Vec<String> = Vec::new();
        if l.exact {
            names.push("exact".into());
        }
        if l.closed {
            names.push("closed_form".into());
        }
        let estimates = l.estimate_names(args.target);
        if l.bounds || l.asym {
            names.extend(estimates.iter().cloned());
        }
        if errors {
            names.extend(estimates.iter().map(|n| format!("rel_{n}")));
        }
        l.names = names;
        l
    }

    fn estimate_names(&self, target: Target) -> Vec<String> {
        let mut v = Vec::new();
        if self.bounds {
            v.extend(bound_kinds(target).iter().map(|k| k.to_string()));
        }
        if self.asym {
            v.push("asym".into());
        }
        v
    }

    fn row(&self, target: Target, p: Params, oracle: &Oracle, force: bool) -> Row {
        let err = |e: marcumq::Error| e.to_string();
        let mut cells = Vec::new();
        let exact = evaluate(target, p, oracle, force).map(|e| e.value).map_err(err);
        if self.exact {
            cells.push(exact.clone());
        }
        if self.closed {
            cells.push(match closed_form(target, p) {
                Ok(Some(e)) => Ok(e.value),
                Ok(None) => Err("order is not half-odd".into()),
                Err(e) => Err(e.to_string()),
            });
        }
        let mut estimates = Vec::new();
        if self.bounds {
            estimates.extend(bound_kinds(target).iter().map(|&k| bound_value(target, k, p).map_err(err)));
        }
        if self.asym {
            estimates.push(asym_value(target, p).map_err(err));
        }
        if self.errors {
            let rels: Vec<_> = estimates
                .iter()
                .map(|v| match (v, &exact) {
                    (Ok(v), Ok(x)) if *x > 0.0 && x.is_finite() => Ok((v - x) / x),
                    (Err(e), _) => Err(e.clone()),
                    (_, Err(e)) => Err(format!("exact value unavailable: {e}")),
                    (_, Ok(_)) => Err("exact value is zero".into()),
                })
                .collect();
            cells.extend(estimates);
            cells.extend(rels);
        } else {
            cells.extend(estimates);
        }
        Row { cells }
    }
}

fn sweep(cli: &Cli, args: &SweepArgs) -> CmdResult {
    let axis = sweep_axis(args.axis);
    let nuttall = args.target != Target::Marcum;
    if args.axis == SweepAxis::Mu && !nuttall {
        return Err("the marcum target has no mu axis".into());
    }
    let fixed = Params { nu: args.nu, mu: args.mu, a: args.a, b: args.b };
    let grid =
        GridSpec::uniform(axis, args.from, args.to, args.step, fixed, Transform::Identity).map_err(|e| e.to_string())?;
    let layout = Layout::new(args);
    let o = oracle(cli);
    let rows: Vec<Row> =
        grid.points.par_iter().map(|&x| layout.row(args.target, grid.params_at(x), &o, cli.force_oracle)).collect();

    for (i, name) in layout.names.iter().enumerate() {
        let missing: Vec<&String> = rows.iter().filter_map(|r| r.cells[i].as_ref().err()).collect();
        if let Some(first) = missing.first() {
            eprintln!("note: {name} unavailable at {} of {} points ({first})", missing.len(), rows.len());
        }
    }

    let mut meta = vec![("target", target_name(args.target).to_string())];
    if nuttall {
        meta.push(("mu", args.mu.to_string()));
    }
    meta.extend([("nu", args.nu.to_string()), ("a", args.a.to_string()), ("b", args.b.to_string())]);
    meta.extend([
        ("axis", axis.to_string()),
        ("from", args.from.to_string()),
        ("to", args.to.to_string()),
        ("step", args.step.to_string()),
        ("force_oracle", cli.force_oracle.to_string()),
    ]);

    let table = if args.max_errors {
        max_error_table(&layout, &grid, &rows, axis)
    } else {
        let mut header = vec!["nu".to_string()];
        if nuttall {
            header.push("mu".into());
        }
        header.extend(["a".to_string(), "b".to_string()]);
        header.extend(layout.names.iter().cloned());
        let mut t = Table::new(header);
        for (&x, r) in grid.points.iter().zip(&rows) {
            let p = grid.params_at(x);
            let mut cells = vec![num(p.nu)];
            if nuttall {
                cells.push(num(p.mu));
            }
            cells.extend([num(p.a), num(p.b)]);
            cells.extend(r.cells.iter().map(|c| opt(c.as_ref().ok().copied())));
            t.rows.push(cells);
        }
        t
    };
    meta.push(("max_errors", args.max_errors.to_string()));
    emit(cli, Format::Csv, metadata("sweep", &meta), &table)?;
    Ok(ExitCode::SUCCESS)
}

fn max_error_table(layout: &Layout, grid: &GridSpec, rows: &[Row], axis: Axis) -> Table {
    let mut t = Table::new(["estimate".to_string(), "max_abs_rel_error".into(), format!("at_{axis}"), "points".into()]);
    for (i, name) in layout.names.iter().enumerate() {
        let Some(est) = name.strip_prefix("rel_") else { continue };
        let mut best: Option<(f64, f64)> = None;
        let mut count = 0;
        for (&x, r) in grid.points.iter().zip(rows) {
            if let Ok(v) = r.cells[i] {
                count += 1;
                if best.is_none_or(|(m, _)| v.abs() > m) {
                    best = Some((v.abs(), x));
                }
            }
        }
        t.rows.push(vec![
            est.to_string(),
            opt(best.map(|b| b.0)),
            opt(best.map(|b| b.1)),
            count.to_string(),
        ]);
    }
    t
}

fn verdict_row(v: &PropertyVerdict) -> Vec<String> {
    let expected = match v.expected {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "probe",
    };
    let first = v
        .violations
        .first()
        .map(|w| format!("x={} {} residual={}", w.point, w.fixed, short(w.residual)))
        .unwrap_or_default();
    vec![
        v.property_id.clone(),
        v.kind.to_string(),
        if v.pass { "PASS" } else { "FAIL" }.into(),
        expected.into(),
        v.checked_points.to_string(),
        v.excluded_points.to_string(),
        v.violations.len().to_string(),
        if v.max_residual.is_finite() { short(v.max_residual) } else { String::new() },
        first,
    ]
}

fn verify(cli: &Cli, conjectures: bool, only: Option<&str>) -> CmdResult {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let o = Oracle::default();
    let suite = run_theorem_suite(&o, tol, only).map_err(|e| e.to_string())?;
    let extra = if conjectures { scan_conjectures(&o, tol, only).map_err(|e| e.to_string())? } else { Vec::new() };
    if suite.is_empty() && extra.is_empty() {
        return Err(format!("no clause id starts with '{}'", only.unwrap_or_default()));
    }
    let mut t = Table::new([
        "id",
        "kind",
        "status",
        "expected",
        "checked",
        "excluded",
        "violations",
        "max_residual",
        "first_violation",
    ]);
    t.rows.extend(suite.iter().chain(&extra).map(verdict_row));
    let unexpected: Vec<&str> = suite.iter().filter(|v| !v.as_expected()).map(|v| v.property_id.as_str()).collect();
    let mut meta = vec![("tol", tol.to_string()), ("conjectures", conjectures.to_string())];
    if let Some(f) = only {
        meta.push(("only", f.to_string()));
    }
    emit(cli, Format::Pretty, metadata("verify", &meta), &t)?;
    if cli.format != Some(Format::Csv) {
        println!("{} clauses, {} not as expected", suite.len(), unexpected.len());
    }
    if unexpected.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed: {}", unexpected.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn pdfdump(cli: &Cli, args: &PdfArgs) -> CmdResult {
    let grid = GridSpec::uniform(Axis::B, args.from, args.to, args.step, Params::default(), Transform::Identity)
        .map_err(|e| e.to_string())?;
    let mut t = Table::new(["x", "nu", "lambda", "ln_pdf"]);
    let mut missing = Vec::new();
    for &x in &grid.points {
        let (nu, lambda) = match args.mode {
            PdfMode::Dof => (x, args.fixed),
            PdfMode::Noncentrality => (args.fixed, x),
        };
        let v = ln_pdf_noncentral_chisq(nu, lambda, x);
        if let Err(e) = &v {
            missing.push(format!("x={x}: {e}"));
        }
        t.rows.push(vec![num(x), num(nu), num(lambda), opt(v.ok())]);
    }
    for m in &missing {
        eprintln!("note: ln_pdf unavailable at {m}");
    }
    let mode = match args.mode {
        PdfMode::Dof => "dof",
        PdfMode::Noncentrality => "noncentrality",
    };
    let meta = [
        ("mode", mode.to_string()),
        ("fixed", args.fixed.to_string()),
        ("from", args.from.to_string()),
        ("to", args.to.to_string()),
        ("step", args.step.to_string()),
    ];
    emit(cli, Format::Csv, metadata("pdfdump", &meta), &t)?;
    Ok(ExitCode::SUCCESS)
}

fn moment(cli: &Cli, args: &MomentArgs) -> CmdResult {
    let dist = ScaledChiSquare::new(args.n, args.s, args.sigma).map_err(|e| e.to_string())?;
    let o = oracle(cli);
    let e = truncated_moment(&dist, args.j, args.lo, args.hi, &o, cli.force_oracle).map_err(|e| e.to_string())?;
    let (mu, nu) = dist.nuttall_orders(args.j);
    let mut t = Table::new(["quantity", "value"]);
    t.rows.push(vec!["nuttall_mu".into(), num(mu)]);
    t.rows.push(vec!["nuttall_nu".into(), num(nu)]);
    t.rows.push(vec!["nuttall_a".into(), num(dist.tau())]);
    t.rows.push(vec!["moment".into(), num(e.value)]);
    t.rows.push(vec!["abs_error_estimate".into(), num(e.abs_error_estimate)]);
    t.rows.push(vec!["method".into(), e.method.to_string()]);
    if args.check {
        let q = truncated_moment_quad(&dist, args.j, args.lo, args.hi, &o).map_err(|e| e.to_string())?;
        let rel = if q.value == 0.0 { (e.value - q.value).abs() } else { ((e.value - q.value) / q.value).abs() };
        t.rows.push(vec!["quadrature".into(), num(q.value)]);
        t.rows.push(vec!["rel_difference".into(), num(rel)]);
    }
    let meta = [
        ("n", args.n.to_string()),
        ("s", args.s.to_string()),
        ("sigma", args.sigma.to_string()),
        ("j", args.j.to_string()),
        ("lo", args.lo.to_string()),
        ("hi", args.hi.to_string()),
        ("force_oracle", cli.force_oracle.to_string()),
    ];
    emit(cli, Format::Pretty, metadata("moment", &meta), &t)?;
    Ok(ExitCode::SUCCESS)
}
