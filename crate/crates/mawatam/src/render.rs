//! ASCII and SVG pictures of mazes and assemblies.
use std::collections::BTreeSet;
use std::fmt::Write as _;

use mawatam_core::{Assembly, Coord, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RenderFormat {
    #[default]
    Ascii,
    Svg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: RenderFormat,
    /// Pixels per cell in SVG output; values below 4 are raised to 4.
    pub cell_size: u32,
    pub show_glues: bool,
    /// Cells outlined in SVG output.
    pub highlight: BTreeSet<Coord>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { format: RenderFormat::Ascii, cell_size: 24, show_glues: false, highlight: BTreeSet::new() }
    }
}

pub fn render(a: &Assembly, opts: &RenderOptions) -> String {
    match opts.format {
        RenderFormat::Ascii => render_ascii(a),
        RenderFormat::Svg => render_svg(a, opts),
    }
}

/// One glyph per cell, north row first: `#` seed, first letter of the tile name, `.` empty.
pub fn render_ascii(a: &Assembly) -> String {
    let Some(r) = a.bounds() else {
        return String::new();
    };
    let ts = a.tileset();
    let mut s = String::new();
    for y in (r.min.y..=r.max.y).rev() {
        for x in r.min.x..=r.max.x {
            let c = Coord::new(x, y);
            let ch = if a.maze().is_seed(c) {
                '#'
            } else if let Some(t) = a.tile_at(c) {
                ts.tile(t).name.chars().next().unwrap_or('?')
            } else {
                '.'
            };
            s.push(ch);
        }
        s.push('\n');
    }
    s
}

fn escape(s: &str) -> String {
    let mut o = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '<' => o.push_str("&lt;"),
            '>' => o.push_str("&gt;"),
            '&' => o.push_str("&amp;"),
            '"' => o.push_str("&quot;"),
            '\'' => o.push_str("&apos;"),
            c => o.push(c),
        }
    }
    o
}

/// Standalone SVG: one `rect.seed` per seed cell and one `rect.tile` per placed tile.
pub fn render_svg(a: &Assembly, opts: &RenderOptions) -> String {
    let cs = opts.cell_size.max(4) as i64;
    let Some(r) = a.bounds() else {
        return format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{cs}\" height=\"{cs}\" viewBox=\"0 0 {cs} {cs}\">\n\
             <rect class=\"background\" x=\"0\" y=\"0\" width=\"{cs}\" height=\"{cs}\" fill=\"#ffffff\"/>\n</svg>\n"
        );
    };
    let (w, h) = (r.width() as i64 * cs, r.height() as i64 * cs);
    let px = |c: Coord| ((c.x - r.min.x) as i64 * cs, (r.max.y - c.y) as i64 * cs);
    let font = (cs / 2).max(2);
    let mut s = String::new();
    writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">").unwrap();
    writeln!(s, "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>").unwrap();
    for &c in a.maze().cells() {
        let (x, y) = px(c);
        writeln!(s, "<rect class=\"seed\" x=\"{x}\" y=\"{y}\" width=\"{cs}\" height=\"{cs}\" fill=\"#444444\"/>").unwrap();
    }
    let ts = a.tileset();
    for &(c, t) in a.trace() {
        let (x, y) = px(c);
        let name = escape(&ts.tile(t).name);
        writeln!(
            s,
            "<rect class=\"tile\" x=\"{x}\" y=\"{y}\" width=\"{cs}\" height=\"{cs}\" fill=\"#cfe3ff\" stroke=\"#6b8fc7\"><title>{name} {} {}</title></rect>",
            c.x, c.y
        )
        .unwrap();
        writeln!(
            s,
            "<text class=\"name\" x=\"{}\" y=\"{}\" font-size=\"{font}\" text-anchor=\"middle\" dominant-baseline=\"central\">{name}</text>",
            x + cs / 2,
            y + cs / 2
        )
        .unwrap();
    }
    if opts.show_glues {
        let small = (cs / 4).max(1);
        for (e, g) in a.glue_view() {
            let (x, y) = px(e.cell());
            let (gx, gy) = match e.side() {
                Side::N => (x + cs / 2, y + small),
                _ => (x + cs - small, y + cs / 2),
            };
            writeln!(
                s,
                "<text class=\"glue\" x=\"{gx}\" y=\"{gy}\" font-size=\"{small}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"#b03030\">{}</text>",
                escape(g.as_str())
            )
            .unwrap();
        }
    }
    for &c in &opts.highlight {
        if r.contains(c) {
            let (x, y) = px(c);
            writeln!(s, "<rect class=\"highlight\" x=\"{x}\" y=\"{y}\" width=\"{cs}\" height=\"{cs}\" fill=\"none\" stroke=\"#e02020\" stroke-width=\"2\"/>").unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use mawatam_core::tilesets;
    use mawatam_core::{GlueLabel, Maze};

    #[test]
    fn empty_maze() {
        let a = Assembly::new(Maze::new(), tilesets::nand_nxor());
        assert_eq!(render_ascii(&a), "");
        let svg = render_svg(&a, &RenderOptions::default());
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let rects: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("rect")).collect();
        assert_eq!(rects.len(), 1);
        assert_eq!(rects[0].attribute("class"), Some("background"));
    }

    #[test]
    fn one_tile_ascii() {
        let mut m = Maze::new();
        m.add_cell(Coord::new(1, 0)).unwrap();
        m.add_cell(Coord::new(0, 1)).unwrap();
        m.set_glue(Coord::new(1, 0), Side::W, GlueLabel::bit(true));
        m.set_glue(Coord::new(0, 1), Side::S, GlueLabel::bit(false));
        let mut a = Assembly::new(m, tilesets::nand_nxor());
        let id = a.tileset().id_of("01").unwrap();
        a.place(Coord::new(0, 0), id).unwrap();
        assert_eq!(render_ascii(&a), "#.\n0#\n");
    }

    #[test]
    fn svg_escapes_labels() {
        assert_eq!(escape("a<&>\"'"), "a&lt;&amp;&gt;&quot;&apos;");
    }
}
