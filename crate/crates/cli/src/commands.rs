//! The computational subcommands, each rendering its result in one format.

use jackfac::basis::character_product;
use jackfac::characters::ch_classical;
use jackfac::cumulants::kappa_dot;
use jackfac::free::{kl_of_character, kl_of_cumulant, KLPolynomial};
use jackfac::jack::jack_in_p_basis;
use jackfac::{ChExpansion, Error, Partition, Result};
use serde::Serialize;

use crate::cache::Cache;
use crate::{cached, Format};

fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn to_csv<R: Serialize>(header: &[&str], records: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidInput(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in records {
        w.serialize(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub(crate) fn tuple_text(pis: &[Partition]) -> String {
    pis.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct PowerSumRecord {
    pi: String,
    coeff: String,
}

/// `J_lambda` in power sums.
pub fn jack(lambda: &Partition, format: Format) -> Result<String> {
    let e = jack_in_p_basis(lambda)?;
    let records: Vec<PowerSumRecord> = e
        .terms()
        .iter()
        .map(|(pi, c)| PowerSumRecord {
            pi: pi.to_string(),
            coeff: c.render("a"),
        })
        .collect();
    match format {
        Format::Pretty => Ok(e.render()),
        Format::Json => to_json(&serde_json::json!({"lambda": lambda.to_string(), "terms": records})),
        Format::Csv => to_csv(&["pi", "coeff"], &records),
    }
}

#[derive(Serialize)]
struct CharRecord {
    pi: String,
    lambda: String,
    value: String,
}

/// `Ch_pi(lambda)`.
pub fn character(pi: &Partition, lambda: &Partition, format: Format) -> Result<String> {
    let value = ch_classical(pi, lambda)?;
    let record = CharRecord {
        pi: pi.to_string(),
        lambda: lambda.to_string(),
        value: value.to_string(),
    };
    match format {
        Format::Pretty => Ok(record.value),
        Format::Json => to_json(&record),
        Format::Csv => to_csv(&["pi", "lambda", "value"], &[record]),
    }
}

/// One `(mu, g(delta))` row of an expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct DeltaRow {
    pub mu: String,
    pub g: String,
    /// Coefficients of `g` in increasing powers of `delta`.
    pub coefficients: Vec<String>,
}

/// Rows of an expansion in `delta`-form, largest `mu` first.
pub fn delta_rows(e: &ChExpansion) -> Vec<DeltaRow> {
    e.delta_form()
        .into_iter()
        .rev()
        .map(|(mu, d)| DeltaRow {
            mu: mu.to_string(),
            g: d.to_string(),
            coefficients: d.0.coeffs().iter().map(jackfac::algebra::format_rational).collect(),
        })
        .collect()
}

#[derive(Serialize)]
struct CsvDeltaRow<'a> {
    mu: &'a str,
    g: &'a str,
}

fn render_expansion(label: &str, e: &ChExpansion, format: Format) -> Result<String> {
    let rows = delta_rows(e);
    match format {
        Format::Pretty => Ok(format!("{label} = {e}")),
        Format::Json => to_json(&rows),
        Format::Csv => {
            let csv_rows: Vec<CsvDeltaRow> = rows.iter().map(|r| CsvDeltaRow { mu: &r.mu, g: &r.g }).collect();
            to_csv(&["mu", "g"], &csv_rows)
        }
    }
}

/// `Ch_pi Ch_sigma` expanded in `Ch_mu` with coefficients in `delta`.
pub fn structure(pi: &Partition, sigma: &Partition, format: Format, cache: Option<&Cache>) -> Result<String> {
    let e: ChExpansion = cached(cache, &format!("structure {pi} {sigma}"), || {
        character_product(pi, sigma)
    })?;
    render_expansion(&format!("Ch{pi}*Ch{sigma}"), &e, format)
}

/// `kappa_.(Ch_{pi_1}, ..)`.
pub fn cumulant(pis: &[Partition], format: Format, cache: Option<&Cache>) -> Result<String> {
    if pis.is_empty() {
        return Err(Error::InvalidInput("cumulant needs at least one partition".into()));
    }
    let mut key_order = pis.to_vec();
    key_order.sort();
    let e: ChExpansion = cached(cache, &format!("cumulant {}", tuple_text(&key_order)), || {
        kappa_dot(pis)
    })?;
    let args: Vec<String> = pis.iter().map(|p| format!("Ch{p}")).collect();
    render_expansion(&format!("kappa({})", args.join(", ")), &e, format)
}

#[derive(Serialize)]
struct CsvKLRow {
    gamma_power: u32,
    cumulant_indices: String,
    coeff: String,
}

/// Kerov-Lassalle polynomial of `Ch_pi` (one argument) or of
/// `kappa_.(Ch_{pi_1}, ..)` (several).
pub fn kl(pis: &[Partition], format: Format, cache: Option<&Cache>) -> Result<String> {
    let (label, poly): (String, KLPolynomial) = match pis {
        [] => return Err(Error::InvalidInput("kl needs at least one partition".into())),
        [pi] => (
            format!("Ch{pi}"),
            cached(cache, &format!("kl character {pi}"), || kl_of_character(pi))?,
        ),
        _ => {
            let mut key_order = pis.to_vec();
            key_order.sort();
            let args: Vec<String> = pis.iter().map(|p| format!("Ch{p}")).collect();
            (
                format!("kappa({})", args.join(", ")),
                cached(cache, &format!("kl cumulant {}", tuple_text(&key_order)), || {
                    kl_of_cumulant(pis)
                })?,
            )
        }
    };
    match format {
        Format::Pretty => Ok(format!("{label} = {poly}")),
        Format::Json => to_json(&poly),
        Format::Csv => {
            let rows: Vec<CsvKLRow> = poly
                .ordered_terms()
                .into_iter()
                .map(|(m, c)| CsvKLRow {
                    gamma_power: m.gamma_power,
                    cumulant_indices: m
                        .cumulant_indices
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" "),
                    coeff: jackfac::algebra::format_rational(c),
                })
                .collect();
            to_csv(&["gamma_power", "cumulant_indices", "coeff"], &rows)
        }
    }
}
