use std::sync::Arc;

use mawatam::render::{render_svg, RenderFormat, RenderOptions};
use mawatam_core::circuit::prime_circuit;
use mawatam_core::gadget::builtin_library;
use mawatam_core::layout::compile;
use mawatam_core::{tilesets, RunConfig};

#[test]
fn prime_terminal_svg_has_one_rect_per_tile() {
    for id in ["nand-nxor", "collatz"] {
        let ts = Arc::new(tilesets::builtin(id).unwrap());
        let c = compile(&prime_circuit(), id, &builtin_library(id).unwrap()).unwrap();
        let (out, term, _) = c.run(&ts, &[true, true, false], &RunConfig::default()).unwrap();
        assert!(!out);
        let opts = RenderOptions { format: RenderFormat::Svg, show_glues: true, ..RenderOptions::default() };
        let svg = render_svg(&term, &opts);
        let doc = roxmltree::Document::parse(&svg).expect("well-formed");
        let count = |class: &str| doc.descendants().filter(|n| n.has_tag_name("rect") && n.attribute("class") == Some(class)).count();
        assert_eq!(count("tile"), term.placed_count());
        assert_eq!(count("seed"), term.maze().cells().len());
    }
}
