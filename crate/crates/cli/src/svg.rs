//! Minimal self-contained SVG line chart of a sweep.

use crate::sweep::SweepRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const SERIES: [(&str, &str); 4] = [
    ("f_stage1", "#1f77b4"),
    ("f_stage2", "#d62728"),
    ("f_stage3", "#2ca02c"),
    ("eof", "#e6b800"),
];

fn series_value(row: &SweepRow, k: usize) -> f64 {
    if k < 3 {
        row.fidelity[k]
    } else {
        row.eof
    }
}

pub fn render(rows: &[SweepRow], x_label: &str) -> String {
    let x_max = rows
        .iter()
        .map(|r| r.param)
        .fold(f64::MIN_POSITIVE, f64::max);
    let y_max = rows
        .iter()
        .flat_map(|r| (0..4).map(move |k| series_value(r, k)))
        .filter(|v| v.is_finite())
        .fold(1.0, f64::max);
    let px = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - y / y_max * (HEIGHT - 2.0 * MARGIN);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<path d=\"M{l:.1},{t:.1} V{b:.1} H{r:.1}\" stroke=\"black\" fill=\"none\"/>\n",
        l = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    for (x, anchor, text) in [(MARGIN, "start", 0.0), (WIDTH - MARGIN, "end", x_max)] {
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"{anchor}\">{text}</text>\n",
            HEIGHT - MARGIN + 16.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x_label}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{y_max:.3}</text>\n",
        MARGIN - 4.0,
        MARGIN + 4.0
    ));

    for (k, (name, colour)) in SERIES.iter().enumerate() {
        let points: Vec<String> = rows
            .iter()
            .filter(|r| series_value(r, k).is_finite())
            .map(|r| format!("{:.2},{:.2}", px(r.param), py(series_value(r, k))))
            .collect();
        if points.is_empty() {
            continue;
        }
        svg.push_str(&format!(
            "<polyline points=\"{}\" stroke=\"{colour}\" stroke-width=\"2\" fill=\"none\"/>\n",
            points.join(" ")
        ));
        let ly = MARGIN + 16.0 * k as f64;
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{ly:.1}\" fill=\"{colour}\">{name}</text>\n",
            WIDTH - MARGIN - 64.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
