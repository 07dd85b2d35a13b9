//! Report rendering and emission. All numbers are rendered with 17
//! significant digits (`{:.16e}`), non-finite values become JSON `null`, and
//! field order is fixed, so identical runs produce byte-identical output.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::config::{CliError, OutputFormat};

/// 17 significant digits; non-finite → `null` (valid JSON, unambiguous CSV).
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// JSON `[re, im]` array for a complex value.
pub fn fmt_complex(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

fn fmt_complex_opt(z: Option<Complex64>) -> String {
    match z {
        Some(z) => fmt_complex(z),
        None => "null".to_string(),
    }
}

fn fmt_bool_opt(b: Option<bool>) -> String {
    match b {
        Some(true) => "true".to_string(),
        Some(false) => "false".to_string(),
        None => "null".to_string(),
    }
}

/// Minimal JSON string escaping (quotes, backslashes, control characters).
pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_str_list(items: &[String]) -> String {
    let parts: Vec<String> = items.iter().map(|s| json_str(s)).collect();
    format!("[{}]", parts.join(","))
}

/// Solve/verify report: the candidate constants plus the verification
/// outcome. `None` constants mean the exponential family is empty.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub case: String,
    pub amp: Option<Complex64>,
    pub free_c: Option<Complex64>,
    pub rate: Option<Complex64>,
    pub c0: Option<Complex64>,
    pub c1: Option<Complex64>,
    pub mu: Complex64,
    pub nu: Complex64,
    pub c_freedom: Option<bool>,
    pub max_rel_residual: f64,
    pub verdict: String,
}

impl SolveReport {
    fn render_json(&self) -> String {
        format!(
            "{{\"case\":{},\"A\":{},\"C\":{},\"D\":{},\"c0\":{},\"c1\":{},\"mu\":{},\"nu\":{},\"c_freedom\":{},\"max_rel_residual\":{},\"verdict\":{}}}\n",
            json_str(&self.case),
            fmt_complex_opt(self.amp),
            fmt_complex_opt(self.free_c),
            fmt_complex_opt(self.rate),
            fmt_complex_opt(self.c0),
            fmt_complex_opt(self.c1),
            fmt_complex(self.mu),
            fmt_complex(self.nu),
            fmt_bool_opt(self.c_freedom),
            fmt_f64(self.max_rel_residual),
            json_str(&self.verdict),
        )
    }

    fn render_csv(&self) -> String {
        let pair = |z: Option<Complex64>| match z {
            Some(z) => format!("{},{}", fmt_f64(z.re), fmt_f64(z.im)),
            None => "null,null".to_string(),
        };
        let mut out = String::new();
        out.push_str(
            "case,re_A,im_A,re_C,im_C,re_D,im_D,re_c0,im_c0,re_c1,im_c1,re_mu,im_mu,re_nu,im_nu,c_freedom,max_rel_residual,verdict\n",
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            self.case,
            pair(self.amp),
            pair(self.free_c),
            pair(self.rate),
            pair(self.c0),
            pair(self.c1),
            pair(Some(self.mu)),
            pair(Some(self.nu)),
            fmt_bool_opt(self.c_freedom),
            fmt_f64(self.max_rel_residual),
            self.verdict,
        ));
        out
    }
}

/// ℘ sample sheet over one fundamental cell.
#[derive(Debug, Clone)]
pub struct WpReport {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub area: f64,
    /// Rows of (re z, im z, re ℘, im ℘, ode_residual).
    pub rows: Vec<[f64; 5]>,
}

pub const WP_COLUMNS: &str = "re_z,im_z,re_p,im_p,ode_residual";

impl WpReport {
    fn render_json(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{{\"omega1\":{},\"omega2\":{},\"area\":{},\"columns\":{},\"rows\":[",
            fmt_complex(self.omega1),
            fmt_complex(self.omega2),
            fmt_f64(self.area),
            json_str_list(
                &WP_COLUMNS.split(',').map(str::to_string).collect::<Vec<_>>()
            ),
        ));
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let vals: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&format!("[{}]", vals.join(",")));
        }
        out.push_str("]}\n");
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(WP_COLUMNS);
        out.push('\n');
        for row in &self.rows {
            let vals: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&vals.join(","));
            out.push('\n');
        }
        out
    }
}

/// One parametrization sweep row: η index plus the sample values.
#[derive(Debug, Clone, Copy)]
pub struct ParamRow {
    pub eta: u8,
    /// (re z, im z, re w, im w, re F, im F, re G, im G,
    ///  fermat_residual, cubic_residual, relation_residual)
    pub values: [f64; 11],
}

pub const PARAM_COLUMNS: &str = "eta,re_z,im_z,re_w,im_w,re_f,im_f,re_g,im_g,fermat_residual,cubic_residual,relation_residual";

#[derive(Debug, Clone)]
pub struct ParamReport {
    pub h: Vec<Complex64>,
    pub points_used: usize,
    pub rows: Vec<ParamRow>,
    pub max_fermat_residual: f64,
    pub max_cubic_residual: f64,
    pub max_relation_residual: f64,
}

impl ParamReport {
    fn render_json(&self) -> String {
        let h: Vec<String> = self.h.iter().map(|&z| fmt_complex(z)).collect();
        let mut out = String::new();
        out.push_str(&format!(
            "{{\"h\":[{}],\"points_used\":{},\"columns\":{},\"rows\":[",
            h.join(","),
            self.points_used,
            json_str_list(
                &PARAM_COLUMNS.split(',').map(str::to_string).collect::<Vec<_>>()
            ),
        ));
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let vals: Vec<String> = row.values.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&format!("[{},{}]", row.eta, vals.join(",")));
        }
        out.push_str(&format!(
            "],\"max_fermat_residual\":{},\"max_cubic_residual\":{},\"max_relation_residual\":{}}}\n",
            fmt_f64(self.max_fermat_residual),
            fmt_f64(self.max_cubic_residual),
            fmt_f64(self.max_relation_residual),
        ));
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(PARAM_COLUMNS);
        out.push('\n');
        for row in &self.rows {
            let vals: Vec<String> = row.values.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&format!("{},{}\n", row.eta, vals.join(",")));
        }
        out
    }
}

/// Characteristic-curve report. The `ratio` column (T·A/(πr²)) is present
/// only for the plain ℘ target.
#[derive(Debug, Clone)]
pub struct NevanReport {
    pub label: String,
    /// (r, m, N, T, optional ratio).
    pub samples: Vec<(f64, f64, f64, f64, Option<f64>)>,
    pub include_ratio: bool,
    pub excluded: Vec<(f64, String)>,
    /// (rho_hat, fit_r_min, fit_r_max, fit_quality, notes), if estimable.
    pub order: Option<(f64, f64, f64, f64, Vec<String>)>,
    pub notes: Vec<String>,
}

impl NevanReport {
    fn columns(&self) -> Vec<String> {
        let mut cols = vec!["r".to_string(), "m".to_string(), "N".to_string(), "T".to_string()];
        if self.include_ratio {
            cols.push("ratio".to_string());
        }
        cols
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{{\"label\":{},\"columns\":{},\"samples\":[",
            json_str(&self.label),
            json_str_list(&self.columns()),
        ));
        for (i, &(r, m, n, t, ratio)) in self.samples.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let mut vals = vec![fmt_f64(r), fmt_f64(m), fmt_f64(n), fmt_f64(t)];
            if self.include_ratio {
                vals.push(fmt_f64(ratio.unwrap_or(f64::NAN)));
            }
            out.push_str(&format!("[{}]", vals.join(",")));
        }
        out.push_str("],\"excluded\":[");
        for (i, (r, why)) in self.excluded.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{},{}]", fmt_f64(*r), json_str(why)));
        }
        out.push_str("],\"order\":");
        match &self.order {
            Some((rho, fit_min, fit_max, quality, notes)) => {
                out.push_str(&format!(
                    "{{\"rho_hat\":{},\"fit_r_min\":{},\"fit_r_max\":{},\"fit_quality\":{},\"notes\":{}}}",
                    fmt_f64(*rho),
                    fmt_f64(*fit_min),
                    fmt_f64(*fit_max),
                    fmt_f64(*quality),
                    json_str_list(notes),
                ));
            }
            None => out.push_str("null"),
        }
        out.push_str(&format!(",\"notes\":{}}}\n", json_str_list(&self.notes)));
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns().join(","));
        out.push('\n');
        for &(r, m, n, t, ratio) in &self.samples {
            let mut vals = vec![fmt_f64(r), fmt_f64(m), fmt_f64(n), fmt_f64(t)];
            if self.include_ratio {
                vals.push(fmt_f64(ratio.unwrap_or(f64::NAN)));
            }
            out.push_str(&vals.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum Report {
    Solve(SolveReport),
    Wp(WpReport),
    Param(ParamReport),
    Nevanlinna(NevanReport),
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match (self, format) {
            (Report::Solve(r), OutputFormat::Json) => r.render_json(),
            (Report::Solve(r), OutputFormat::Csv) => r.render_csv(),
            (Report::Wp(r), OutputFormat::Json) => r.render_json(),
            (Report::Wp(r), OutputFormat::Csv) => r.render_csv(),
            (Report::Param(r), OutputFormat::Json) => r.render_json(),
            (Report::Param(r), OutputFormat::Csv) => r.render_csv(),
            (Report::Nevanlinna(r), OutputFormat::Json) => r.render_json(),
            (Report::Nevanlinna(r), OutputFormat::Csv) => r.render_csv(),
        }
    }
}

/// Render and write the report to `path`, or to stdout when no path is set.
/// An unwritable path is an internal error (exit 1).
pub fn emit_report(
    report: &Report,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let content = report.render(format);
    match path {
        Some(path) => std::fs::write(path, content.as_bytes()).map_err(|e| {
            CliError::Internal(format!("cannot write output to {}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Internal(format!("cannot write to stdout: {e}")))
        }
    }
}
