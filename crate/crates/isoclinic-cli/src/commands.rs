use crate::wire::{self, domain, schema, CliError};
use crate::{AiryCmd, AlgebraCmd, Cli, Command, ConnCmd, Field, HitchinCmd, KtypeCmd, LanglandsCmd, OperCmd, VerifyCmd};
use isoclinic::airy::{airy_family, canonical_at_zero, globalize, infinity_check, GlobalConnection};
use isoclinic::connection::{reduce_to_canonical, CanonicalForm, FormalConnection};
use isoclinic::hitchin::{fiber_over_phi, hitchin_on_bj, langlands_parameter, little_weyl_group, local_hitchin, verify_hitchin_image, Differential};
use isoclinic::ktype::{relevance_check, special_check, special_window, ToralCharacter, ToralDatum};
use isoclinic::oper::{canonical_to_minimal_oper, dim_match_check, minimal_oper_form, oper_to_canonical_at, OperForm};
use isoclinic::par::Exec;
use isoclinic::scalar::{rational, Cyclotomic, Float, Scalar};
use isoclinic::series::VectorSeries;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub fn dispatch(cli: &Cli, input: &Value) -> Result<Value, CliError> {
    match cli.field {
        Field::Exact => run::<Cyclotomic>(cli, input),
        Field::Float => run::<Float>(cli, input),
    }
}

fn run<F: Scalar>(cli: &Cli, input: &Value) -> Result<Value, CliError> {
    match &cli.command {
        Command::Algebra(AlgebraCmd::Info) => algebra_info(input),
        Command::Oper(OperCmd::Slope) => {
            let o = OperForm::<F>::from_wire(input).map_err(schema)?;
            Ok(json!({ "slope": rational::format(&o.slope()) }))
        }
        Command::Oper(OperCmd::Reduce) => oper_reduce::<F>(cli, input),
        Command::Oper(OperCmd::Minimal) => oper_minimal::<F>(input),
        Command::Oper(OperCmd::Invert) => {
            let cf = CanonicalForm::<F>::from_wire(input.get("canonical").unwrap_or(input)).map_err(schema)?;
            let o = canonical_to_minimal_oper(&cf).map_err(domain)?;
            Ok(oper_wire(&o))
        }
        Command::Conn(ConnCmd::Reduce) => {
            let conn = connection::<F>(cli, input)?;
            let red = reduce_to_canonical(&conn).map_err(domain)?;
            Ok(json!({ "canonical": red.canonical.to_wire(), "word": red.word.to_wire(), "reduced": red.reduced.to_wire() }))
        }
        Command::Conn(ConnCmd::RefinedTerms) => {
            let conn = connection::<F>(cli, input)?;
            let cf = reduce_to_canonical(&conn).map_err(domain)?.canonical;
            let refined = cf.refined_leading_terms().map_err(domain)?;
            Ok(json!({ "canonical": cf.to_wire(), "refined": refined.to_wire(conn.algebra()) }))
        }
        Command::Ktype(KtypeCmd::Build) => {
            let d = datum::<F>(input)?;
            let lat = d.build_lattices().map_err(domain)?;
            let report = d.verify(&lat);
            Ok(json!({ "datum": d.to_wire(), "lattices": lat.to_wire(&d), "report": report.to_wire() }))
        }
        Command::Ktype(KtypeCmd::Special) => {
            let d = datum::<F>(input)?;
            let phi = character(&d, input)?;
            let window = special_window(&d).map_err(domain)?;
            Ok(json!({
                "special": special_check(&d, &phi).map_err(domain)?,
                "relevant": relevance_check(&d, &phi).map_err(domain)?,
                "window": [window.start(), window.end()],
            }))
        }
        Command::Hitchin(HitchinCmd::Map) => hitchin_map::<F>(cli, input),
        Command::Hitchin(HitchinCmd::VerifyImage) => {
            let d = datum::<F>(input)?;
            let samples = wire::int_or(input, "samples", 50)?;
            let window = wire::int_or(input, "window", 5)?;
            if samples < 0 || window < 1 {
                return Err(schema("\"samples\" must be >= 0 and \"window\" >= 1"));
            }
            let r = verify_hitchin_image(&d, samples as usize, window, cli.seed, Exec::from_env()).map_err(domain)?;
            Ok(r.to_wire())
        }
        Command::Hitchin(HitchinCmd::Fibers) => {
            let d = datum::<F>(input)?;
            let phi = character(&d, input)?;
            let w0 = little_weyl_group(&d).map_err(domain)?;
            let values = hitchin_on_bj(&d, &phi).map_err(domain)?;
            let fiber = fiber_over_phi(&d, &values).map_err(domain)?;
            let orbit = w0.orbit(&d, &phi);
            let same = fiber.len() == orbit.len() && fiber.iter().all(|x| orbit.contains(x)) && orbit.iter().all(|x| fiber.contains(x));
            let g = &d.algebra;
            Ok(json!({
                "w0_order": w0.order,
                "coordinates": values.iter().map(|((i, j), v)| json!([i, j, v.to_wire()])).collect::<Vec<_>>(),
                "fiber": fiber.iter().map(|x| x.to_wire(g)).collect::<Vec<_>>(),
                "orbit": orbit.iter().map(|x| x.to_wire(g)).collect::<Vec<_>>(),
                "fiber_is_orbit": same,
            }))
        }
        Command::Langlands(LanglandsCmd::Param) => {
            let d = datum::<F>(input)?;
            let phi = character(&d, input)?;
            Ok(langlands_parameter(&d, &phi).map_err(domain)?.to_wire())
        }
        Command::Airy(AiryCmd::Gen) => airy_gen::<F>(input),
        Command::Airy(AiryCmd::Infinity) => {
            let gc = GlobalConnection::<F>::from_wire(input.get("connection").unwrap_or(input)).map_err(schema)?;
            Ok(infinity_check(&gc).map_err(domain)?.to_wire())
        }
        Command::Verify(VerifyCmd::DimMatch) => {
            let g = wire::algebra(input)?;
            let (m, n) = (wire::positive(input, "m")?, wire::int(input, "N")?);
            Ok(dim_match_check(&g, m as i64, n).map_err(domain)?.to_wire())
        }
    }
}

fn algebra_info(input: &Value) -> Result<Value, CliError> {
    let g = wire::algebra(input)?;
    Ok(json!({
        "algebra": g.name(),
        "dim": g.dim(),
        "rank": g.rank(),
        "degrees": g.degrees(),
        "coxeter_number": g.coxeter_number(),
        "roots": g.num_roots(),
        "regular_elliptic_numbers": g.regular_elliptic_numbers().map_err(domain)?,
        "dual": g.dual().name(),
    }))
}

fn oper_wire<F: Scalar>(o: &OperForm<F>) -> Value {
    json!({ "oper": o.to_wire(), "display": o.display_t(), "slope": rational::format(&o.slope()) })
}

fn oper_reduce<F: Scalar>(cli: &Cli, input: &Value) -> Result<Value, CliError> {
    let o = OperForm::<F>::from_wire(input).map_err(schema)?;
    let red = oper_to_canonical_at(&o, cli.precision).map_err(domain)?;
    Ok(json!({
        "N": red.n,
        "m": red.m,
        "slope": rational::format(&red.canonical.slope()),
        "isoclinic": red.canonical.is_isoclinic().map_err(domain)?,
        "canonical": red.canonical.to_wire(),
    }))
}

fn oper_minimal<F: Scalar>(input: &Value) -> Result<Value, CliError> {
    let g = wire::algebra(input)?;
    let (n, m) = (wire::int(input, "N")?, wire::int(input, "m")?);
    let leading = wire::pairs::<F>(input, "leading")?;
    let lower = wire::pairs::<F>(input, "lower")?;
    let o = minimal_oper_form(&g, n, m, &leading, &lower).map_err(domain)?;
    Ok(oper_wire(&o))
}

fn connection<F: Scalar>(cli: &Cli, input: &Value) -> Result<FormalConnection<F>, CliError> {
    let conn = FormalConnection::<F>::from_wire(input).map_err(schema)?;
    Ok(match cli.precision {
        Some(p) => conn.truncate(p),
        None => conn,
    })
}

fn datum<F: Scalar>(input: &Value) -> Result<ToralDatum<F>, CliError> {
    let g = wire::algebra(input)?;
    let m = wire::positive(input, "m")?;
    let n = wire::int(input, "N")?;
    let y = input.get("Y").map(|v| wire::element::<F>(&g, v)).transpose()?;
    ToralDatum::new(&g, m, n, y).map_err(domain)
}

/// The "character" field, checked against the datum and completed with
/// zeros on the missing levels.
fn character<F: Scalar>(d: &ToralDatum<F>, input: &Value) -> Result<ToralCharacter<F>, CliError> {
    let raw = ToralCharacter::<F>::from_wire(&d.algebra, wire::field(input, "character")?).map_err(schema)?;
    d.character(raw.components).map_err(domain)
}

fn hitchin_map<F: Scalar>(cli: &Cli, input: &Value) -> Result<Value, CliError> {
    let g = wire::algebra(input)?;
    let form = wire::field(input, "form")?;
    let mut omega = VectorSeries::<F>::from_wire(form, |c| g.element_from_wire(c)).map_err(schema)?;
    if let Some(p) = cli.precision {
        omega = omega.truncate(p);
    }
    let against = match input.get("against").map(Value::as_str) {
        None | Some(Some("dt")) => Differential::Dt,
        Some(Some("du/u")) => Differential::DuOverU,
        _ => return Err(schema("\"against\" must be \"dt\" or \"du/u\"")),
    };
    Ok(local_hitchin(&g, &omega, against).map_err(domain)?.to_wire())
}

fn airy_gen<F: Scalar>(input: &Value) -> Result<Value, CliError> {
    let gc = if let Some(o) = input.get("oper") {
        let oper = OperForm::<F>::from_wire(o).map_err(schema)?;
        globalize(&oper, wire::int(input, "N")?, wire::int(input, "m")?).map_err(domain)?
    } else {
        let g = wire::algebra(input)?;
        let top = input.get("top").map(wire::scalar::<F>).transpose()?.unwrap_or_else(F::one);
        let mut lower = BTreeMap::new();
        if let Some(list) = input.get("lower") {
            for t in list.as_array().ok_or_else(|| schema("\"lower\" must be an array of [i, v]"))? {
                let t = t.as_array().filter(|t| t.len() == 2).ok_or_else(|| schema("each entry of \"lower\" is [i, v]"))?;
                let i = t[0].as_u64().ok_or_else(|| schema("i must be a positive integer"))? as usize;
                lower.insert(i, wire::scalar::<F>(&t[1])?);
            }
        }
        airy_family(&g, top, &lower).map_err(domain)?
    };
    let at_zero = canonical_at_zero(&gc).map_err(domain)?;
    Ok(json!({ "connection": gc.to_wire(), "at_zero": at_zero.to_wire() }))
}
