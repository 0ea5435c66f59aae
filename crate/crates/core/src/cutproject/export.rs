use std::fmt::Write as _;
use std::io;

/// CSV with header `physical,internal,<coord columns>`; exact syntax in the
/// first two columns, floats after.
pub fn write_csv<W: io::Write>(
    out: W,
    coord_names: &[&str],
    rows: &[(String, String, Vec<f64>)],
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["physical", "internal"];
    header.extend_from_slice(coord_names);
    w.write_record(&header)?;
    for (phys, internal, coords) in rows {
        let mut rec = vec![phys.clone(), internal.clone()];
        rec.extend(coords.iter().map(|c| format!("{c:.12}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Tick marks on a horizontal axis, one per position.
pub fn svg_ticks(positions: &[f64]) -> String {
    const WIDTH: f64 = 1000.0;
    const MARGIN: f64 = 20.0;
    let lo = positions.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = positions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="60" viewBox="0 0 {} 60">"#,
        WIDTH + 2.0 * MARGIN,
        WIDTH + 2.0 * MARGIN
    );
    let _ =
        writeln!(s, r#"<line x1="{MARGIN}" y1="30" x2="{}" y2="30" stroke="gray" stroke-width="1"/>"#, WIDTH + MARGIN);
    for p in positions {
        let x = MARGIN + (p - lo) / span * WIDTH;
        let _ = writeln!(s, r#"<line x1="{x:.3}" y1="20" x2="{x:.3}" y2="40" stroke="black" stroke-width="1"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
