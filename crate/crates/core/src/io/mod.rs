//! Configuration loading and result emitters.

mod config;
mod emit;

pub use config::{
    family_config_json, load_family_config, load_versioned, parse_family_config, parse_versioned, FamilyConfig,
    LatticeConfig, TriangleInput, RATIONAL_EXAMPLE, SCHEMA_VERSION, TORUS_EXAMPLE,
};
pub use emit::{
    emit, field_csv, field_json, field_svg, render, scalars_csv, scalars_json, table_csv, table_json, Format,
    Output, Table, SHEET_COLORS,
};
