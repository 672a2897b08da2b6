//! Plain-text field, mask and trajectory files.
//!
//! A field file starts with a version line and a dimensions line, then
//! holds one comma-separated row per `j` (row `j = 0` first), each with the
//! `I + 1` node values in `i` order. 3D fields repeat that block for every
//! `k`. Values use 17 significant digits, so a write/read round trip is
//! bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use hjsweep::{Field2, Field3, Grid2, Grid3, Orientation, Trajectory};

pub const FIELD_HEADER: &str = "# hjsweep-field v1";
pub const MASK_HEADER: &str = "# hjsweep-mask v1";

/// `d.dddddddddddddddde+XX`, or `inf` / `-inf` / `nan`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.16e}");
    let (mantissa, exp) = s
        .split_once('e')
        .expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn parse_value(s: &str) -> Result<f64> {
    let s = s.trim();
    s.parse::<f64>()
        .with_context(|| format!("'{s}' is not a number"))
}

fn orientation_tag(o: Orientation) -> &'static str {
    match o {
        Orientation::Min => "min",
        Orientation::Max => "max",
    }
}

fn dims_line2(g: &Grid2, orientation: Orientation) -> String {
    let [xmin, xmax, ymin, ymax] = g.bounds();
    format!(
        "# dim=2 xmin={} xmax={} ymin={} ymax={} I={} J={} orientation={}",
        format_value(xmin),
        format_value(xmax),
        format_value(ymin),
        format_value(ymax),
        g.ni(),
        g.nj(),
        orientation_tag(orientation)
    )
}

fn push_row(out: &mut String, row: impl Iterator<Item = f64>) {
    let mut first = true;
    for v in row {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format_value(v));
    }
    out.push('\n');
}

pub fn field2_to_string(field: &Field2) -> String {
    let mut out = String::new();
    writeln!(out, "{FIELD_HEADER}").unwrap();
    writeln!(out, "{}", dims_line2(field.grid(), field.orientation())).unwrap();
    for row in field.node_rows() {
        push_row(&mut out, row.into_iter());
    }
    out
}

pub fn field3_to_string(field: &Field3) -> String {
    let g = field.grid();
    let b = g.bounds();
    let [ni, nj, nk] = g.cells();
    let mut out = String::new();
    writeln!(out, "{FIELD_HEADER}").unwrap();
    writeln!(
        out,
        "# dim=3 xmin={} xmax={} ymin={} ymax={} zmin={} zmax={} I={ni} J={nj} K={nk} periodic_z={} orientation={}",
        format_value(b[0]),
        format_value(b[1]),
        format_value(b[2]),
        format_value(b[3]),
        format_value(b[4]),
        format_value(b[5]),
        g.periodic_z(),
        orientation_tag(field.orientation())
    )
    .unwrap();
    let nks = if g.periodic_z() { nk } else { nk + 1 };
    for k in 0..nks {
        for j in 0..=nj {
            push_row(&mut out, (0..=ni).map(|i| field.get(i, j, k)));
        }
    }
    out
}

pub fn export_field(field: &Field2, path: &Path) -> Result<()> {
    fs::write(path, field2_to_string(field)).with_context(|| format!("writing {}", path.display()))
}

pub fn export_field3(field: &Field3, path: &Path) -> Result<()> {
    fs::write(path, field3_to_string(field)).with_context(|| format!("writing {}", path.display()))
}

/// Key/value pairs of a dimensions line.
fn parse_dims(line: &str) -> Result<Vec<(String, String)>> {
    let body = line
        .strip_prefix('#')
        .with_context(|| format!("expected a dimensions line, got '{line}'"))?;
    body.split_whitespace()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .with_context(|| format!("malformed entry '{kv}' in dimensions line"))?;
            Ok((k.to_string(), v.to_string()))
        })
        .collect()
}

fn lookup<'a>(dims: &'a [(String, String)], key: &str) -> Result<&'a str> {
    dims.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .with_context(|| format!("dimensions line lacks '{key}'"))
}

fn lookup_usize(dims: &[(String, String)], key: &str) -> Result<usize> {
    let v = lookup(dims, key)?;
    v.parse()
        .with_context(|| format!("'{key}={v}' is not a count"))
}

fn lookup_orientation(dims: &[(String, String)]) -> Result<Orientation> {
    match dims
        .iter()
        .find(|(k, _)| k == "orientation")
        .map(|(_, v)| v.as_str())
    {
        None | Some("min") => Ok(Orientation::Min),
        Some("max") => Ok(Orientation::Max),
        Some(o) => bail!("unknown orientation '{o}'"),
    }
}

fn parse_row(line: &str, expect: usize, lineno: usize) -> Result<Vec<f64>> {
    let row: Vec<f64> = line
        .split(',')
        .map(parse_value)
        .collect::<Result<_>>()
        .with_context(|| format!("line {lineno}"))?;
    ensure!(
        row.len() == expect,
        "line {lineno}: expected {expect} values, found {}",
        row.len()
    );
    Ok(row)
}

pub fn field2_from_str(text: &str) -> Result<Field2> {
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some(FIELD_HEADER),
        "missing '{FIELD_HEADER}' header"
    );
    let dims = parse_dims(lines.next().context("missing dimensions line")?)?;
    ensure!(lookup(&dims, "dim")? == "2", "not a 2D field file");
    let bounds = ["xmin", "xmax", "ymin", "ymax"].map(|k| lookup(&dims, k).and_then(parse_value));
    let [xmin, xmax, ymin, ymax] = bounds;
    let (ni, nj) = (lookup_usize(&dims, "I")?, lookup_usize(&dims, "J")?);
    let grid = Grid2::new([xmin?, xmax?, ymin?, ymax?], ni, nj, 1)?;
    let mut field = Field2::new(&grid, lookup_orientation(&dims)?);
    for j in 0..=nj {
        let line = lines
            .next()
            .with_context(|| format!("file ends before row j={j}"))?;
        for (i, v) in parse_row(line, ni + 1, j + 3)?.into_iter().enumerate() {
            field.set(i, j, v);
        }
    }
    ensure!(
        lines.all(|l| l.trim().is_empty()),
        "trailing data after the last row"
    );
    Ok(field)
}

pub fn field3_from_str(text: &str) -> Result<Field3> {
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some(FIELD_HEADER),
        "missing '{FIELD_HEADER}' header"
    );
    let dims = parse_dims(lines.next().context("missing dimensions line")?)?;
    ensure!(lookup(&dims, "dim")? == "3", "not a 3D field file");
    let mut b = [0.0; 6];
    for (slot, key) in b
        .iter_mut()
        .zip(["xmin", "xmax", "ymin", "ymax", "zmin", "zmax"])
    {
        *slot = parse_value(lookup(&dims, key)?)?;
    }
    let cells = [
        lookup_usize(&dims, "I")?,
        lookup_usize(&dims, "J")?,
        lookup_usize(&dims, "K")?,
    ];
    let periodic = match lookup(&dims, "periodic_z")? {
        "true" => true,
        "false" => false,
        v => bail!("'periodic_z={v}' is not a boolean"),
    };
    let grid = Grid3::new(b, cells, 1, periodic)?;
    let mut field = Field3::new(&grid, lookup_orientation(&dims)?);
    let nks = if periodic { cells[2] } else { cells[2] + 1 };
    let mut lineno = 2;
    for k in 0..nks {
        for j in 0..=cells[1] {
            lineno += 1;
            let line = lines
                .next()
                .with_context(|| format!("file ends before row j={j}, k={k}"))?;
            for (i, v) in parse_row(line, cells[0] + 1, lineno)?
                .into_iter()
                .enumerate()
            {
                field.set(i, j, k, v);
            }
        }
    }
    ensure!(
        lines.all(|l| l.trim().is_empty()),
        "trailing data after the last row"
    );
    Ok(field)
}

pub fn import_field(path: &Path) -> Result<Field2> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    field2_from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn import_field3(path: &Path) -> Result<Field3> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    field3_from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `1` where `phi <= 0` (visible), else `0`, laid out like a field file.
pub fn mask_to_string(field: &Field2) -> String {
    let mut out = String::new();
    writeln!(out, "{MASK_HEADER}").unwrap();
    writeln!(out, "{}", dims_line2(field.grid(), field.orientation())).unwrap();
    for row in field.node_rows() {
        let cells: Vec<&str> = row
            .iter()
            .map(|&v| if v <= 0.0 { "1" } else { "0" })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn trajectory_to_csv(t: &Trajectory) -> String {
    let mut out = String::from("t,x,y,theta,v,omega\n");
    for s in &t.samples {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_value(s.t),
            format_value(s.x),
            format_value(s.y),
            format_value(s.theta),
            s.v,
            s.omega
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_format() {
        assert_eq!(format_value(0.0), "0.0000000000000000e+00");
        assert_eq!(format_value(-1.5e-3), "-1.5000000000000000e-03");
        assert_eq!(format_value(2.0e120), "2.0000000000000000e+120");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
        for v in [
            0.1,
            1.0 / 3.0,
            -7.25e-300,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
        ] {
            assert_eq!(
                parse_value(&format_value(v)).unwrap().to_bits(),
                v.to_bits()
            );
        }
    }

    #[test]
    fn zero_field_layout() {
        let g = Grid2::new([0.0, 1.0, 0.0, 1.0], 2, 2, 1).unwrap();
        let f = Field2::from_fn(&g, Orientation::Min, |_, _, _| 0.0);
        let text = field2_to_string(&f);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], FIELD_HEADER);
        assert!(lines[1].starts_with("# dim=2 "));
        let zero = "0.0000000000000000e+00";
        assert_eq!(lines[2], [zero; 3].join(","));
    }

    #[test]
    fn round_trip_is_bitwise() {
        let g = Grid2::new([-1.0, 1.0, -0.5, 0.7], 5, 3, 1).unwrap();
        let f = Field2::from_fn(&g, Orientation::Min, |i, j, p| {
            if i == 0 && j == 3 {
                f64::INFINITY
            } else {
                p[0].sin() / (1.0 + p[1] * p[1]) + 1e-17 * i as f64
            }
        });
        let back = field2_from_str(&field2_to_string(&f)).unwrap();
        assert_eq!(back.grid(), f.grid());
        for j in 0..=3 {
            for i in 0..=5 {
                assert_eq!(back.get(i, j).to_bits(), f.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn round_trip_3d() {
        let g = Grid3::car_domain(3, 1).unwrap();
        let f = Field3::from_fn(&g, Orientation::Max, |idx, p| p[2] * idx[0] as f64 - p[1]);
        let back = field3_from_str(&field3_to_string(&f)).unwrap();
        assert_eq!(back.orientation(), Orientation::Max);
        for i in 0..=3 {
            for j in 0..=3 {
                for k in 0..3 {
                    assert_eq!(back.get(i, j, k).to_bits(), f.get(i, j, k).to_bits());
                }
            }
        }
    }

    #[test]
    fn rejects_short_rows() {
        let g = Grid2::new([0.0, 1.0, 0.0, 1.0], 2, 2, 1).unwrap();
        let f = Field2::from_fn(&g, Orientation::Min, |_, _, _| 1.0);
        let text = field2_to_string(&f).replacen(",1.0000000000000000e+00\n", "\n", 1);
        assert!(field2_from_str(&text).is_err());
    }
}
