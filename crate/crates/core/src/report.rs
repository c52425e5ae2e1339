//! Fixed-schema machine-readable output: scan records as CSV rows, field
//! snapshots and gap curves for plotting. Floating-point values are written
//! in shortest round-trip form, so identical runs emit identical bytes.

use crate::action::ActionGap;
use crate::eos::GasLaw;
use crate::fields::SelfSimilarFanField;
use crate::scan::ScanRecord;

pub const SCHEMA_VERSION: u32 = 1;

pub const SCAN_CSV_COLUMNS: &str = "schema_version,gamma,rho_minus,rho_plus,v_minus,v_plus,rho1,eps2,admissible,nu_minus,nu_plus,beta,eps1,kappa,rate_diff,sarac_two_shock,dafermos_two_shock,failure";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_bool(v: Option<bool>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn scan_record_row(r: &ScanRecord) -> String {
    let failure = r
        .failure
        .as_deref()
        .unwrap_or("")
        .replace([',', '\n'], ";");
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        SCHEMA_VERSION,
        r.gamma,
        r.rho_minus,
        r.rho_plus,
        r.v_minus,
        r.v_plus,
        r.rho1,
        r.eps2,
        r.admissible,
        opt(r.nu_minus),
        opt(r.nu_plus),
        opt(r.beta),
        opt(r.eps1),
        opt(r.kappa),
        opt(r.rate_diff),
        opt_bool(r.sarac_two_shock),
        opt_bool(r.dafermos_two_shock),
        failure
    )
}

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(SCAN_CSV_COLUMNS);
    out.push('\n');
    for r in records {
        out.push_str(&scan_record_row(r));
        out.push('\n');
    }
    out
}

/// Snapshot of a field at fixed time on a vertical grid, for plotting.
pub fn field_snapshot_csv(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    t: f64,
    x2_points: &[f64],
) -> String {
    let mut out = String::from("schema_version,t,x2,rho,v2,energy,lagrangian\n");
    for &x2 in x2_points {
        let r = field.evaluate(t, x2);
        let potential = r.rho * law.internal_energy(r.rho).expect("positive density");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            SCHEMA_VERSION,
            t,
            x2,
            r.rho,
            r.v2,
            r.kinetic_density + potential,
            r.kinetic_density - potential,
        ));
    }
    out
}

/// Sampled gap curve `D(t) = kappa t^2 / 2`, for plotting.
pub fn gap_curve_csv(gap: &ActionGap, t_max: f64, samples: usize) -> String {
    let mut out = String::from("schema_version,t,d_value\n");
    let n = samples.max(2);
    for k in 0..=n {
        let t = t_max * k as f64 / n as f64;
        out.push_str(&format!("{},{},{}\n", SCHEMA_VERSION, t, gap.eval(t)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{solve_two_shock, RiemannData};
    use crate::scan::{scan_grid, DataCase, ScanGrid};

    #[test]
    fn csv_has_fixed_schema_and_is_stable() {
        let grid = ScanGrid {
            rho1_count: 5,
            eps2_count: 2,
            eps2_max: 0.2,
            gammas: vec![2.0],
            cases: vec![DataCase {
                rho_minus: 1.0,
                rho_plus: 1.0,
                v_minus: 1.0,
                v_plus: -1.0,
            }],
            allow_isothermal: false,
        };
        let a = scan_csv(&scan_grid(&grid));
        let b = scan_csv(&scan_grid(&grid));
        assert_eq!(a, b);
        let header = a.lines().next().unwrap();
        assert_eq!(header, SCAN_CSV_COLUMNS);
        assert_eq!(header.split(',').count(), 18);
        for line in a.lines().skip(1) {
            assert_eq!(line.split(',').count(), 18, "row: {line}");
            assert!(line.starts_with(&SCHEMA_VERSION.to_string()));
        }
    }

    #[test]
    fn snapshot_covers_all_regions() {
        let law = GasLaw::new(2.0).unwrap();
        let data = RiemannData::new(law, 1.0, 1.0, 1.0, -1.0).unwrap();
        let shock = solve_two_shock(&data, 1e-12).unwrap();
        let field = crate::fields::two_shock_field(&data, &shock);
        let xs: Vec<f64> = (0..50).map(|i| -2.0 + 4.0 * i as f64 / 49.0).collect();
        let csv = field_snapshot_csv(&field, &law, 1.0, &xs);
        assert_eq!(csv.lines().count(), 51);
        let rhos: Vec<&str> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(3).unwrap())
            .collect();
        assert!(rhos.contains(&"1"));
        assert!(rhos.iter().any(|r| r.starts_with("1.8")));
    }
}
