//! Raw computations. Each returns a JSON value and a text rendering.

use ncps_core::functionals::{
    abs_inverse, cs_density_closed_form, induced_cs_density, variation_generators, wres,
};
use ncps_core::heat::{anomaly_density, heat_coefficients};
use ncps_core::symbol::{dirac_symbol, sign_symbol};
use ncps_core::{parse_element, OperatorFamily};
use ncps_num::flow::uniform_grid;
use ncps_num::{heat_trace_lattice, hermitian_eigenvalues, spectral_flow, ConcreteElement, NumericFamily, OperatorBuilder};
use serde_json::{json, Value};

use crate::config::CheckConfig;
use crate::error::CliError;
use crate::family::FamilySpec;

pub struct Output {
    pub json: Value,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composition {
    /// `D|D|^{-1}`.
    Sign,
    /// `|D|^{-1}`.
    AbsInverse,
    /// `D` itself.
    Dirac,
}

impl Composition {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "sign" => Ok(Composition::Sign),
            "abs-inverse" => Ok(Composition::AbsInverse),
            "dirac" => Ok(Composition::Dirac),
            _ => Err(CliError::flag("--compose", format!("expected sign, abs-inverse or dirac, got {:?}", s))),
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            Composition::Sign => "sign",
            Composition::AbsInverse => "abs-inverse",
            Composition::Dirac => "dirac",
        }
    }
}

fn family(spec: Option<&FamilySpec>, config: &CheckConfig) -> Result<OperatorFamily, CliError> {
    match spec {
        Some(s) => s.operator_family(),
        None => Ok(OperatorFamily::free(config.dim.unwrap_or(3))?),
    }
}

/// `Wres` of a symbol built from the family.
pub fn wres_command(spec: Option<&FamilySpec>, compose: Composition, config: &CheckConfig) -> Result<Output, CliError> {
    let f = family(spec, config)?;
    let dim = f.dim();
    let floor = config.floor.unwrap_or(-(dim as i32));
    let symbol = match compose {
        Composition::Sign => sign_symbol(&f, floor)?,
        Composition::AbsInverse => abs_inverse(&f, floor)?,
        Composition::Dirac => dirac_symbol(&f)?.0,
    };
    let r = wres(&symbol, dim)?;
    let json = json!({
        "family": f.name(),
        "dim": dim,
        "t_order": f.t_cap(),
        "floor": floor,
        "compose": compose.as_str(),
        "vanishing_level": r.vanishing_level().as_str(),
        "density": r.value.to_string(),
        "traced": r.traced.to_string(),
        "tau": r.tau_reduced.to_string(),
    });
    let text = format!("Wres = {}\ntrace = {}\ntau = {}\nvanishing level: {}\n", r.value, r.traced, r.tau_reduced, r.vanishing_level());
    Ok(Output { json, text })
}

/// Heat coefficients of `D²` up to `orders`, optionally localized.
pub fn heat_command(spec: Option<&FamilySpec>, orders: usize, localizer: Option<&str>, config: &CheckConfig) -> Result<Output, CliError> {
    let f = family(spec, config)?;
    let gens = match spec {
        Some(s) => s.generators()?,
        None => Vec::new(),
    };
    let loc = localizer.map(|text| parse_element(text, &gens)).transpose()?;
    let (_, d2) = dirac_symbol(&f)?;
    let coeffs = heat_coefficients(&d2, orders, loc.as_ref())?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in &coeffs {
        text.push_str(&format!("beta_{} = {}\n  tau: {}\n", c.index, c.density, c.tau));
        rows.push(json!({ "index": c.index, "density": c.density.to_string(), "traced": c.traced.to_string(), "tau": c.tau.to_string() }));
    }
    let json = json!({ "family": f.name(), "dim": f.dim(), "t_order": f.t_cap(), "localizer": localizer, "coefficients": rows });
    Ok(Output { json, text })
}

/// Conformal anomaly density per t-grade.
pub fn anomaly_command(config: &CheckConfig) -> Result<Output, CliError> {
    let dim = config.dim.unwrap_or(2);
    let t_order = config.t_order.unwrap_or(1);
    let grades = anomaly_density(&OperatorFamily::conformal(dim, t_order)?)?;
    let mut text = String::new();
    for (j, g) in grades.iter().enumerate() {
        text.push_str(&format!("t^{}: {}\n", j, g));
    }
    let json = json!({ "dim": dim, "t_order": t_order, "grades": grades.iter().map(|g| g.to_string()).collect::<Vec<_>>() });
    Ok(Output { json, text })
}

/// Induced Chern-Simons density of the coupled family in dimension 3.
pub fn cs_density_command() -> Result<Output, CliError> {
    let f = OperatorFamily::coupled(3)?;
    let vars = variation_generators(3);
    let r = induced_cs_density(&f, &vars)?;
    let closed = cs_density_closed_form(&abs_inverse(&f, -3)?, &vars)?;
    let json = json!({
        "density": r.tau_reduced.to_string(),
        "traced": r.traced.to_string(),
        "matches_closed_form": closed == r.traced,
    });
    let text = format!("tau: {}\ntrace: {}\n", r.tau_reduced, r.traced);
    Ok(Output { json, text })
}

fn numeric_family(spec: Option<&FamilySpec>) -> Result<NumericFamily, CliError> {
    match spec {
        Some(s) => s.numeric_family(),
        None => Ok(NumericFamily::FreeDirac),
    }
}

/// Eigenvalues this close to zero count as kernel.
const KERNEL_TOLERANCE: f64 = 1e-12;

fn stats(values: &[f64]) -> Value {
    let kernel = values.iter().filter(|v| v.abs() <= KERNEL_TOLERANCE).count();
    let positive = values.iter().filter(|v| **v > KERNEL_TOLERANCE).count() as i64;
    let negative = values.iter().filter(|v| **v < -KERNEL_TOLERANCE).count() as i64;
    json!({
        "count": values.len(),
        "min": values.first(),
        "max": values.last(),
        "kernel": kernel,
        "kernel_tolerance": KERNEL_TOLERANCE,
        "eta_sum": positive - negative,
    })
}

/// Truncated spectrum of a numerical family at parameter `t`.
pub fn num_spectrum(spec: Option<&FamilySpec>, t: f64, csv: bool, config: &CheckConfig) -> Result<Output, CliError> {
    let fam = numeric_family(spec)?;
    let dim = spec.map(|s| s.dim).or(config.dim).unwrap_or(3);
    let cutoff = config.cutoff.unwrap_or(2);
    let (theta_entries, theta) = config.theta_or_default(dim)?;
    let op = OperatorBuilder::new(&fam, &theta, dim, cutoff)?.at(t)?;
    let values = hermitian_eigenvalues(&op)?;
    let text = if csv {
        let mut s = String::from("index,eigenvalue\n");
        for (i, v) in values.iter().enumerate() {
            s.push_str(&format!("{},{:.15e}\n", i, v));
        }
        s
    } else {
        format!("{} eigenvalues in [{:.6}, {:.6}]\n", values.len(), values.first().unwrap_or(&0.0), values.last().unwrap_or(&0.0))
    };
    let json = json!({
        "dim": dim, "cutoff": cutoff, "t": t, "theta": theta_entries,
        "summary": stats(&values), "eigenvalues": values,
    });
    Ok(Output { json, text })
}

/// Spectral flow of `D + t u*[D,u]`, or of a family file's numerical model.
pub fn num_flow(spec: Option<&FamilySpec>, config: &CheckConfig) -> Result<Output, CliError> {
    let u = config.u.clone().unwrap_or_else(|| vec![1, 0, 0]);
    let fam = match spec {
        Some(s) => s.numeric_family()?,
        None => NumericFamily::UnitaryFlow { shift: u.clone() },
    };
    let dim = spec.map(|s| s.dim).unwrap_or(u.len());
    let cutoff = config.cutoff.unwrap_or(6);
    let grid = config.grid.unwrap_or(101);
    let level = config.level.unwrap_or(ncps_num::DEFAULT_FLOW_LEVEL);
    let (theta_entries, theta) = config.theta_or_default(dim)?;
    let builder = OperatorBuilder::new(&fam, &theta, dim, cutoff)?;
    let report = spectral_flow(|t| builder.at(t), &uniform_grid(0.0, 1.0, grid), level)?;
    let text = format!("spectral flow {} through level {} ({} crossing steps)\n", report.flow, level, report.crossings.len());
    let json = json!({
        "dim": dim, "cutoff": cutoff, "grid": grid, "theta": theta_entries,
        "family": serde_json::to_value(&fam).expect("serializable"),
        "report": serde_json::to_value(&report).expect("serializable"),
    });
    Ok(Output { json, text })
}

/// Lattice heat trace `Tr(h e^{−tD²})` of the free operator.
pub fn num_heat(t: f64, config: &CheckConfig) -> Result<Output, CliError> {
    let dim = config.dim.unwrap_or(3);
    let cutoff = config.cutoff.unwrap_or(40);
    let value = heat_trace_lattice(&ConcreteElement::scalar(1.0), t, dim, cutoff)?;
    let scaled = t.powf(dim as f64 / 2.0) * value;
    let json = json!({ "dim": dim, "cutoff": cutoff, "t": t, "trace": value, "scaled": scaled });
    Ok(Output { json, text: format!("Tr e^(-tD^2) = {:.15e}\nt^(n/2) Tr = {:.15e}\n", value, scaled) })
}
