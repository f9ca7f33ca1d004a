use std::fmt::Write as _;
use std::sync::Arc;

use cherednik::bfun::{
    bfunction_polynomial, jacquet_line, rational_line_kappa, shift_functor_line, BFunctionOptions,
    FreeLineModule, LineModule, LineOModule,
};
use cherednik::cato::{
    aspherical_candidates, aspherical_witness, irreducibles, is_regular_truncated,
    singular_vectors, GradedModule,
};
use cherednik::chered::{pbw_normal_form, Cherednik, Dunkl};
use cherednik::exactfield::{
    format_poly, parse_poly, parse_scalar, Cyclo, Matrix, ParamScalar, Poly, ScalarField, Q,
};
use cherednik::melys::{
    classify_irreducible_melys, factor_linear_melys, stabilizer_strata, EquivariantMap, LinearRep,
    MelysReport,
};
use cherednik::refgroup::{Character, Parameter, ReflectionGroup};
use cherednik::{cato::euler_lowest_eigenvalue, Error};
use serde_json::{json, Value};

use crate::config::{
    command_bool, command_int, command_matrices, command_matrix, command_str, command_strings,
    parse_matrix, Config, ConfigError,
};

/// A failed run: a stable code, the process exit status and a message.
#[derive(Debug)]
pub struct Failure {
    pub code: &'static str,
    pub exit: i32,
    pub message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::Syntax { .. } => "ConfigSyntax",
            ConfigError::Semantic(_) => "ConfigInvalid",
        };
        Failure {
            code,
            exit: 2,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, exit) = match &e {
            Error::DivisionByZero => ("DivisionByZero", 2),
            Error::IncompatibleScalars(_) => ("IncompatibleScalars", 2),
            Error::ZeroPolynomial => ("ZeroPolynomial", 2),
            Error::Parse { .. } => ("Parse", 2),
            Error::InvalidInput(_) => ("InvalidInput", 2),
            Error::GroupTooLarge(_) => ("GroupTooLarge", 3),
            Error::NotInvertible => ("NotInvertible", 2),
            Error::DictionaryMismatch(_) => ("DictionaryMismatch", 4),
            Error::NeedExplicitIrreps => ("NeedExplicitIrreps", 2),
            Error::NotARepresentation(_) => ("NotARepresentation", 2),
            Error::UnknownGenerator(_) => ("UnknownGenerator", 2),
            Error::IncompatibleElements => ("IncompatibleElements", 2),
            Error::TruncationExceeded { .. } => ("TruncationExceeded", 3),
            Error::NotInvariant => ("NotInvariant", 2),
            Error::DegreeCapExceeded(_) => ("DegreeCapExceeded", 3),
            Error::IllegalShift(_) => ("IllegalShift", 2),
            Error::UnsupportedShape(_) => ("UnsupportedShape", 2),
            Error::UnsupportedDimension(_) => ("UnsupportedDimension", 2),
            Error::NotMelys(_) => ("NotMelys", 2),
            Error::HypothesesNotMet(_) => ("HypothesesNotMet", 2),
            Error::ClassificationFailure(_) => ("ClassificationFailure", 4),
            Error::NotEquivariant(_) => ("NotEquivariant", 2),
            Error::Internal(_) => ("Internal", 4),
        };
        Failure {
            code,
            exit,
            message: e.to_string(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: "InvalidInput",
        exit: 2,
        message: msg.into(),
    }
}

/// What a successful command reports.
pub struct Outcome {
    pub text: String,
    pub result: Value,
    pub certificates: Value,
    /// Set when the answer only covers degrees up to the truncation.
    pub caveat: Option<String>,
    /// False when a certificate check failed; the run exits with status 4.
    pub certified: bool,
}

impl Outcome {
    fn plain(text: String, result: Value) -> Outcome {
        Outcome {
            text,
            result,
            certificates: Value::Null,
            caveat: None,
            certified: true,
        }
    }
}

type Run = Result<Outcome, Failure>;

struct Setup {
    group: Arc<ReflectionGroup>,
    param: Parameter,
}

fn setup(cfg: &Config, extra: &[&str]) -> Result<Setup, Failure> {
    let group = cfg.build_group()?;
    let param = cfg.build_parameter(&group, extra)?;
    Ok(Setup { group, param })
}

pub fn run(cfg: &Config, command: &str) -> Run {
    match command {
        "reflections" => reflections(cfg),
        "normal-form" => normal_form(cfg),
        "dunkl" => dunkl(cfg),
        "verma" => verma(cfg),
        "gram" => gram(cfg),
        "singular" => singular(cfg),
        "regular" => regular(cfg),
        "aspherical" => aspherical(cfg),
        "bfunction" => bfunction(cfg),
        "localize" | "series" | "shift" => line(cfg, command),
        "jacquet" => jacquet(cfg),
        "melys-check" => melys_check(cfg),
        "melys-factor" => melys_factor(cfg),
        "strata" => strata(cfg),
        other => Err(invalid(format!("unknown command `{other}`"))),
    }
}

fn truncation_caveat(n: usize) -> Option<String> {
    Some(format!("verified up to degree {n} only"))
}

fn cyclo_vec(v: &[Cyclo]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn param_vec(v: &[ParamScalar]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn cyclo_poly(p: &Poly<Cyclo>) -> String {
    let names: Vec<String> = (1..=p.nvars()).map(|i| format!("x{i}")).collect();
    p.fmt_with(&names, &|c: &Cyclo| c.to_string())
}

fn parameter_json(param: &Parameter) -> Value {
    let names = param.group().slot_names();
    let mut map = serde_json::Map::new();
    for (o, row) in param.values().iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            map.insert(names[o][i].clone(), json!(v.to_string()));
        }
    }
    Value::Object(map)
}

/// The character named `name`. Abelian groups offer every character;
/// other groups offer `triv` and `det`.
fn character(group: &ReflectionGroup, name: &str) -> Result<Character, Failure> {
    if name == "triv" {
        return Ok(Character::trivial(group));
    }
    if group.is_abelian() {
        let all = irreducibles(group, None)?;
        let names: Vec<String> = all.iter().map(|c| c.name.clone()).collect();
        return all.into_iter().find(|c| c.name == name).ok_or_else(|| {
            invalid(format!(
                "unknown character `{name}`; known: {}",
                names.join(", ")
            ))
        });
    }
    if name == "det" {
        return Ok(det_character(group)?);
    }
    Err(invalid(format!(
        "character `{name}` unavailable; non-abelian groups support triv and det"
    )))
}

fn det_character(group: &ReflectionGroup) -> cherednik::Result<Character> {
    let proto = Cyclo::zero(group.field());
    let images: Vec<Matrix<Cyclo>> = group
        .generators()
        .iter()
        .map(|&g| Matrix::from_rows(vec![vec![group.det(g)]], &proto))
        .collect();
    Character::from_generator_images(group, "det", &images)
}

fn irreps(group: &ReflectionGroup) -> Result<Vec<Character>, Failure> {
    if group.is_abelian() {
        Ok(irreducibles(group, None)?)
    } else {
        let mut out = vec![Character::trivial(group)];
        let det = det_character(group)?;
        if det != out[0] {
            out.push(det);
        }
        Ok(out)
    }
}

fn lambda_of(cfg: &Config, group: &ReflectionGroup) -> Result<Character, Failure> {
    character(group, command_str(cfg, "lambda")?.unwrap_or("triv"))
}

fn reflections(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let c = param.c_of_kappa();
    let mut text = format!(
        "group of order {} acting on dimension {}, conductor {}\n",
        group.order(),
        group.dim(),
        group.conductor()
    );
    let mut hyps = Vec::new();
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        let _ = writeln!(
            text,
            "hyperplane {h}: alpha = [{}], ell = {}, orbit {}",
            cyclo_vec(&hp.alpha).join(", "),
            hp.ell,
            hp.orbit
        );
        hyps.push(json!({
            "alpha": cyclo_vec(&hp.alpha),
            "coroot": cyclo_vec(&hp.coroot),
            "ell": hp.ell,
            "orbit": hp.orbit,
        }));
    }
    let mut refl = Vec::new();
    for r in group.reflections() {
        let value = c.values.get(&r.element).map(|v| v.to_string());
        let _ = writeln!(
            text,
            "reflection {} on hyperplane {}: det = {}, c = {}",
            r.element,
            r.hyperplane,
            r.det,
            value.as_deref().unwrap_or("0")
        );
        refl.push(json!({
            "element": r.element,
            "hyperplane": r.hyperplane,
            "det": r.det.to_string(),
            "c": value,
        }));
    }
    Ok(Outcome::plain(
        text,
        json!({
            "order": group.order(),
            "dim": group.dim(),
            "conductor": group.conductor(),
            "hyperplanes": hyps,
            "reflections": refl,
            "parameters": parameter_json(&param),
        }),
    ))
}

fn required<'a>(cfg: &'a Config, key: &str) -> Result<&'a str, Failure> {
    command_str(cfg, key)?.ok_or_else(|| invalid(format!("command.{key} is required")))
}

fn normal_form(cfg: &Config) -> Run {
    let Setup { param, .. } = setup(cfg, &[])?;
    let alg = Cherednik::new(&param)?;
    let expr = required(cfg, "expr")?;
    let nf = pbw_normal_form(&alg, expr)?;
    let text = format!("{expr} = {nf}\n");
    Ok(Outcome::plain(
        text,
        json!({"expr": expr, "normal_form": nf.to_string(), "order": nf.order()}),
    ))
}

fn dunkl(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let alg = Cherednik::new(&param)?;
    let lambda = lambda_of(cfg, &group)?;
    let d = Dunkl::new(&alg, &lambda)?;
    let text_in = required(cfg, "poly")?;
    let p = parse_poly(text_in, param.field(), group.dim())?;
    let zero = Poly::zero(group.dim(), &ParamScalar::zero(param.field()));
    let mut v = vec![zero; d.lambda_dim()];
    v[0] = p;
    let which: Vec<usize> = match command_int(cfg, "y")? {
        Some(j) if j >= 1 && (j as usize) <= group.dim() => vec![j as usize - 1],
        Some(j) => {
            return Err(invalid(format!(
                "command.y = {j} is not in 1..={}",
                group.dim()
            )))
        }
        None => (0..group.dim()).collect(),
    };
    let mut text = String::new();
    let mut out = Vec::new();
    for j in which {
        let r = d.apply_basis(j, &v)?;
        let comps: Vec<String> = r.iter().map(format_poly).collect();
        let _ = writeln!(text, "y{} . ({text_in}) = {}", j + 1, comps.join(" ; "));
        out.push(json!({"y": j + 1, "image": comps}));
    }
    Ok(Outcome::plain(
        text,
        json!({"lambda": lambda.name, "poly": text_in, "images": out}),
    ))
}

fn verma(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let n = cfg.truncation()?;
    let alg = Cherednik::new(&param)?;
    let lambda = lambda_of(cfg, &group)?;
    let module = GradedModule::verma(&alg, &lambda, n)?;
    let eu = euler_lowest_eigenvalue(&param, &lambda)?;
    let simple = module.simple_dims()?;
    let text = format!(
        "Verma module of {} up to degree {n}\ndims: {:?}\nsimple quotient dims: {:?}\nlowest eu eigenvalue: {eu}\n",
        lambda.name,
        module.dims(),
        simple
    );
    Ok(Outcome {
        caveat: truncation_caveat(n),
        ..Outcome::plain(
            text,
            json!({
                "lambda": lambda.name,
                "truncation": n,
                "dims": module.dims(),
                "simple_dims": simple,
                "lowest_eu": eu.to_string(),
            }),
        )
    })
}

fn gram(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let n = cfg.truncation()?;
    let alg = Cherednik::new(&param)?;
    let lambda = lambda_of(cfg, &group)?;
    let module = GradedModule::verma(&alg, &lambda, n)?;
    let isotypes = irreps(&group)?;
    let mut text = format!(
        "contravariant form on the Verma module of {}\n",
        lambda.name
    );
    let mut blocks = Vec::new();
    for m in 0..=n {
        for mu in &isotypes {
            let b = module.gram_block(m, mu)?;
            if b.matrix.rows() == 0 {
                continue;
            }
            let det = b.matrix.determinant()?;
            let rank = b.matrix.rank();
            let _ = writeln!(
                text,
                "degree {m}, isotype {}: size {}, rank {rank}, det = {det}",
                mu.name,
                b.matrix.rows()
            );
            blocks.push(json!({
                "degree": m,
                "isotype": mu.name,
                "size": b.matrix.rows(),
                "rank": rank,
                "det": det.to_string(),
            }));
        }
    }
    Ok(Outcome {
        caveat: truncation_caveat(n),
        ..Outcome::plain(text, json!({"lambda": lambda.name, "blocks": blocks}))
    })
}

fn singular(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let n = cfg.truncation()?;
    let alg = Cherednik::new(&param)?;
    let mut text = String::new();
    let mut out = Vec::new();
    let lambdas = match command_str(cfg, "lambda")? {
        Some(name) => vec![character(&group, name)?],
        None => irreps(&group)?,
    };
    for lambda in lambdas {
        let module = GradedModule::verma(&alg, &lambda, n)?;
        for (m, vecs) in singular_vectors(&module, n)? {
            let _ = writeln!(
                text,
                "{}: {} singular vector(s) in degree {m}",
                lambda.name,
                vecs.len()
            );
            let vs: Vec<Vec<String>> = vecs.iter().map(|v| param_vec(v)).collect();
            out.push(json!({"lambda": lambda.name, "degree": m, "vectors": vs}));
        }
    }
    if out.is_empty() {
        let _ = writeln!(text, "no singular vectors in degrees 1..={n}");
    }
    Ok(Outcome {
        caveat: truncation_caveat(n),
        ..Outcome::plain(text, json!({"singular": out}))
    })
}

fn regular(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let n = cfg.truncation()?;
    let alg = Cherednik::new(&param)?;
    let reps = irreps(&group)?;
    let regular = is_regular_truncated(&alg, &reps, n)?;
    let text = format!(
        "{} up to degree {n}\n",
        if regular { "regular" } else { "not regular" }
    );
    Ok(Outcome {
        caveat: truncation_caveat(n),
        ..Outcome::plain(text, json!({"regular": regular, "truncation": n}))
    })
}

fn aspherical(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let n = cfg.truncation()?;
    let alg = Cherednik::new(&param)?;
    let reps = irreps(&group)?;
    let witness = aspherical_witness(&alg, &reps, n)?;
    let candidates = aspherical_candidates(&group, &reps, n)?;
    let mut text = match &witness {
        Some(w) => format!(
            "aspherical: L({}) has no invariants up to degree {n}; dims {:?}\n",
            w.lambda, w.simple_dims
        ),
        None => format!("no aspherical simple module found up to degree {n}\n"),
    };
    let _ = writeln!(text, "{} candidate hyperplanes", candidates.len());
    Ok(Outcome {
        caveat: truncation_caveat(n),
        ..Outcome::plain(
            text,
            json!({
                "aspherical": witness.is_some(),
                "witness": witness.map(|w| json!({"lambda": w.lambda, "simple_dims": w.simple_dims})),
                "candidates": candidates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }),
        )
    })
}

fn bfunction(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &["s"])?;
    let alg = Cherednik::new(&param)?;
    let f_text = required(cfg, "f")?;
    let f = parse_poly(f_text, param.field(), group.dim())?;
    let defaults = BFunctionOptions::default();
    let opts = BFunctionOptions {
        max_op_degree: cfg.options.max_op_degree.unwrap_or(defaults.max_op_degree),
        s_degree: cfg.options.s_degree.unwrap_or(defaults.s_degree),
    };
    let r = bfunction_polynomial(&alg, &f, &opts)?;
    let b = r.factors.display();
    let certified = r.certified();
    let text = format!(
        "b(s) = {b}\nD = {}\norder {}, certified: {certified}\n",
        r.operator, r.order
    );
    let specs: Vec<Value> = r
        .specializations
        .iter()
        .map(|(k, ok)| json!({"s": k, "holds": ok}))
        .collect();
    Ok(Outcome {
        text,
        result: json!({
            "f": f_text,
            "b": b,
            "b_expanded": r.b.to_string(),
            "operator": r.operator.to_string(),
            "order": r.order,
        }),
        certificates: json!({
            "residual_zero": r.residual_zero,
            "specializations": specs,
            "sha256": r.certificate_hash,
            "certified": certified,
        }),
        caveat: None,
        certified,
    })
}

fn rational(text: &str) -> Result<Q, Failure> {
    let ctx = ScalarField::new(1, Vec::new())?;
    parse_scalar(text, &ctx)?
        .to_rational()
        .ok_or_else(|| invalid(format!("`{text}` is not rational")))
}

fn line_module(cfg: &Config, param: &Parameter) -> Result<LineModule, Failure> {
    let (ell, kappa) = rational_line_kappa(param)?;
    match command_str(cfg, "module")?.unwrap_or("polynomial") {
        "polynomial" => Ok(LineModule::polynomial(ell, kappa)?),
        "verma" => {
            let j = command_int(cfg, "j")?.unwrap_or(0);
            if j < 0 {
                return Err(invalid("command.j must be nonnegative"));
            }
            Ok(LineModule::verma(ell, kappa, j as u32)?)
        }
        other => Err(invalid(format!(
            "unknown module `{other}`; use polynomial or verma"
        ))),
    }
}

fn bound(b: Option<i64>) -> Value {
    b.map_or(Value::Null, |v| json!(v))
}

fn describe(m: &LineModule) -> String {
    let lo = m.lo.map_or("-inf".to_string(), |v| v.to_string());
    let hi = m.hi.map_or("inf".to_string(), |v| v.to_string());
    format!(
        "span of x^i v for {lo} <= i < {hi}, a = {}, j = {}",
        m.a, m.j
    )
}

fn module_json(m: &LineModule) -> Value {
    json!({
        "ell": m.ell,
        "kappa": m.kappa.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        "j": m.j,
        "a": m.a.to_string(),
        "lo": bound(m.lo),
        "hi": bound(m.hi),
    })
}

fn line(cfg: &Config, command: &str) -> Run {
    let Setup { param, .. } = setup(cfg, &[])?;
    let m = line_module(cfg, &param)?;
    match command {
        "localize" => {
            let loc = m.localize();
            let text = match &loc {
                Some(l) => format!("localization: {}\n", describe(l)),
                None => "localization is zero\n".to_string(),
            };
            Ok(Outcome::plain(
                text,
                json!({"module": module_json(&m), "localization": loc.as_ref().map(module_json)}),
            ))
        }
        "series" => {
            let window = cfg.options.window.unwrap_or(m.needed_window().max(16));
            let s = m.composition_series(window);
            let mut text = format!("length {} (window {window})\n", s.length());
            let mut factors = Vec::new();
            for f in &s.factors {
                let lw = f.lowest_weight.as_ref().map(|q| q.to_string());
                let hw = f.highest_weight.as_ref().map(|q| q.to_string());
                let _ = writeln!(
                    text,
                    "factor [{}, {}): lowest weight {}, highest weight {}",
                    f.lo.map_or("-inf".into(), |v| v.to_string()),
                    f.hi.map_or("inf".into(), |v| v.to_string()),
                    lw.as_deref().unwrap_or("none"),
                    hw.as_deref().unwrap_or("none")
                );
                factors.push(json!({
                    "lo": bound(f.lo),
                    "hi": bound(f.hi),
                    "lowest_weight": lw,
                    "highest_weight": hw,
                }));
            }
            Ok(Outcome {
                text,
                result: json!({
                    "module": module_json(&m),
                    "length": s.length(),
                    "breaks": s.breaks,
                    "factors": factors,
                }),
                certificates: json!({"window": s.window, "all_breaks_in_window": s.certified}),
                caveat: (!s.certified).then(|| format!("breaks beyond |i| <= {window} exist")),
                certified: true,
            })
        }
        _ => {
            let new = command_strings(cfg, "kappa_new")?
                .ok_or_else(|| invalid("command.kappa_new is required"))?
                .iter()
                .map(|t| rational(t))
                .collect::<Result<Vec<_>, _>>()?;
            let omega = command_bool(cfg, "omega_contains_origin")?.unwrap_or(true);
            let shifted = shift_functor_line(&m, &new, omega)?;
            let text = match &shifted {
                Some(l) => format!("shifted module: {}\n", describe(l)),
                None => "shifted module is zero\n".to_string(),
            };
            Ok(Outcome::plain(
                text,
                json!({"module": module_json(&m), "shifted": shifted.as_ref().map(module_json)}),
            ))
        }
    }
}

fn jacquet(cfg: &Config) -> Run {
    let Setup { group, param } = setup(cfg, &[])?;
    let n = cfg.truncation()?;
    let free = match command_matrix(cfg, "fiber")? {
        Some(rows) if rows.is_empty() => None,
        Some(rows) => Some(FreeLineModule::new(
            &param,
            &parse_matrix(&rows, group.field())?,
        )?),
        None => Some(FreeLineModule::polynomial(&param)?),
    };
    let torsion = match cfg.command.get("torsion") {
        None => Vec::new(),
        Some(v) => v
            .clone()
            .try_into::<Vec<Vec<String>>>()
            .map_err(|_| invalid("command.torsion must be a list of coefficient lists"))?
            .iter()
            .map(|g| g.iter().map(|t| rational(t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?,
    };
    let j = jacquet_line(&LineOModule { free, torsion }, n)?;
    let mut text = format!("Jacquet module up to degree {n}: dims {:?}\n", j.dims());
    let mut pieces = Vec::new();
    for p in &j.pieces {
        let _ = writeln!(
            text,
            "degree {}: eu = {}, dim {}",
            p.degree,
            p.eigenvalue,
            p.basis.len()
        );
        pieces.push(json!({
            "degree": p.degree,
            "eigenvalue": p.eigenvalue.to_string(),
            "basis": p.basis.iter().map(|v| param_vec(v)).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome {
        caveat: truncation_caveat(n),
        ..Outcome::plain(
            text,
            json!({"zero": j.is_zero(), "dims": j.dims(), "pieces": pieces}),
        )
    })
}

fn source_rep(cfg: &Config, group: &Arc<ReflectionGroup>) -> Result<LinearRep, Failure> {
    let defining = LinearRep::defining(group);
    match command_str(cfg, "source")?.unwrap_or("defining") {
        "defining" => Ok(defining),
        "double" => Ok(defining.direct_sum(&defining)?),
        "trivial" => {
            let d = command_int(cfg, "source_dim")?.unwrap_or(1);
            if d < 1 {
                return Err(invalid("command.source_dim must be >= 1"));
            }
            Ok(LinearRep::trivial(group, d as usize))
        }
        "matrices" => {
            let gens = command_matrices(cfg, "source_generators")?
                .ok_or_else(|| invalid("command.source_generators is required"))?;
            let images = gens
                .iter()
                .map(|m| parse_matrix(m, group.field()))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = images.first().map_or(0, |m| m.rows());
            Ok(LinearRep::from_generator_images(group, dim, &images)?)
        }
        other => Err(invalid(format!(
            "unknown source `{other}`; use defining, double, trivial or matrices"
        ))),
    }
}

fn melys_map(cfg: &Config) -> Result<(Setup, EquivariantMap), Failure> {
    let s = setup(cfg, &[])?;
    let source = source_rep(cfg, &s.group)?;
    let target = LinearRep::defining(&s.group);
    let texts = command_strings(cfg, "map")?.ok_or_else(|| invalid("command.map is required"))?;
    let proto = Cyclo::zero(s.group.field());
    let components = texts
        .iter()
        .map(|t| {
            let p = parse_poly(t, s.param.field(), source.dim())?;
            if p.terms().iter().any(|(_, c)| c.to_cyclo().is_none()) {
                return Err(invalid(format!(
                    "map component `{t}` has symbolic coefficients"
                )));
            }
            Ok(p.map_coeffs(&proto, |c| c.to_cyclo().unwrap()))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let map = EquivariantMap::new(&source, &target, components)?;
    Ok((s, map))
}

fn report_json(r: &MelysReport) -> Value {
    json!({
        "holds": r.holds,
        "witness": r.witness.as_ref().map(|w| json!({
            "element": w.element,
            "alpha": cyclo_vec(&w.alpha),
            "pullback": cyclo_poly(&w.pullback),
            "reason": w.reason,
        })),
    })
}

fn melys_check(cfg: &Config) -> Run {
    let (s, map) = melys_map(cfg)?;
    let c = s.param.c_of_kappa();
    let report = map.is_melys(&c)?;
    let strong = map.is_strongly_melys(&c)?;
    let mut text = format!(
        "melys: {}\nstrongly melys: {}\n",
        report.holds, strong.holds
    );
    if let Some(w) = &report.witness {
        let _ = writeln!(
            text,
            "witness: reflection {} with alpha = [{}], pullback {}: {}",
            w.element,
            cyclo_vec(&w.alpha).join(", "),
            cyclo_poly(&w.pullback),
            w.reason
        );
    }
    let mut pulled = Value::Null;
    if report.holds {
        let p = map.pullback_parameter(&c)?;
        let mut m = serde_json::Map::new();
        for (w, v) in &p.values {
            let _ = writeln!(text, "pulled back c({w}) = {v}");
            m.insert(w.to_string(), json!(v.to_string()));
        }
        pulled = Value::Object(m);
    }
    Ok(Outcome::plain(
        text,
        json!({
            "melys": report_json(&report),
            "strongly_melys": report_json(&strong),
            "pullback_parameter": pulled,
        }),
    ))
}

fn melys_factor(cfg: &Config) -> Run {
    let (s, map) = melys_map(cfg)?;
    let c = s.param.c_of_kappa();
    let f = factor_linear_melys(&map, &c)?;
    let mut text = format!("exponents: {:?}\n", f.exponents);
    let mut blocks = Vec::new();
    for (i, b) in f.blocks.iter().enumerate() {
        let _ = writeln!(
            text,
            "block {i}: dim {}, reflections {:?}, {}",
            b.basis.len(),
            b.reflections,
            b.class
        );
        blocks.push(json!({
            "reflections": b.reflections,
            "basis": b.basis.iter().map(|v| cyclo_vec(v)).collect::<Vec<_>>(),
            "class": b.class.to_string(),
        }));
    }
    let polys = |v: &[Poly<Cyclo>]| v.iter().map(cyclo_poly).collect::<Vec<_>>();
    let _ = writeln!(text, "embedding: {}", polys(&f.embedding).join(", "));
    let _ = writeln!(text, "power map: {}", polys(&f.power_map).join(", "));
    let _ = writeln!(text, "projection: {}", polys(&f.projection).join(", "));
    let classification = if map.target().is_irreducible() {
        classify_irreducible_melys(&map, &c)
            .ok()
            .map(|k| k.to_string())
    } else {
        None
    };
    if let Some(k) = &classification {
        let _ = writeln!(text, "classification: {k}");
    }
    let composes = f.composite() == map.components();
    Ok(Outcome {
        text,
        result: json!({
            "exponents": f.exponents,
            "blocks": blocks,
            "fixed_basis": f.fixed_basis.iter().map(|v| cyclo_vec(v)).collect::<Vec<_>>(),
            "source_fixed_dim": f.source_fixed_dim,
            "embedding": polys(&f.embedding),
            "power_map": polys(&f.power_map),
            "projection": polys(&f.projection),
            "classification": classification,
        }),
        certificates: json!({"composite_matches": composes}),
        caveat: None,
        certified: composes,
    })
}

fn strata(cfg: &Config) -> Run {
    let Setup { group, .. } = setup(cfg, &[])?;
    let rep = source_rep(cfg, &group)?;
    let all = stabilizer_strata(&rep);
    let mut text = format!("{} strata\n", all.len());
    let mut out = Vec::new();
    for s in &all {
        let _ = writeln!(
            text,
            "dim {}: stabilizer of order {}, {} translate(s), {} equation(s)",
            s.dim,
            s.parabolic.len(),
            s.orbit_size,
            s.equations.len()
        );
        out.push(json!({
            "dim": s.dim,
            "parabolic": s.parabolic,
            "orbit_size": s.orbit_size,
            "equations": s.equations.iter().map(|v| cyclo_vec(v)).collect::<Vec<_>>(),
            "subspace": s.subspace.iter().map(|v| cyclo_vec(v)).collect::<Vec<_>>(),
            "excluded": s.excluded.len(),
        }));
    }
    Ok(Outcome::plain(text, json!({"strata": out})))
}
