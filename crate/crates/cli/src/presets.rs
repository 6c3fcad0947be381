//! Parameter sets shipped with the tool.

pub const NAMES: [&str; 3] = ["membrane_fig3", "membrane_fig4a", "string_fig4b"];

pub fn get(name: &str) -> Option<&'static str> {
    match name {
        "membrane_fig3" => Some(include_str!("../presets/membrane_fig3.ini")),
        "membrane_fig4a" => Some(include_str!("../presets/membrane_fig4a.ini")),
        "string_fig4b" => Some(include_str!("../presets/string_fig4b.ini")),
        _ => None,
    }
}
