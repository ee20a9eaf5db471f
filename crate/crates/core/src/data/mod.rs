//! Data for experiments: the three synthetic benchmark settings,
//! training-label contamination, fixed-dataset splitting with robust
//! standardization, and loaders for CSV tables, curve archives, and
//! the cached banknote authentication download.

mod contam;
mod gen;
mod io;
mod split;

pub use contam::{mislabel, mislabel_curves};
pub use gen::{
    gen_setting1, gen_setting1_sized, gen_setting2, gen_setting2_sized, gen_setting3,
    gen_setting3_sized, setting1_draws, setting2_draws, setting3_draws, SimulatedData,
};
pub use io::{
    fetch_uci_banknote, load_csv, load_points_csv, load_ucr, LoadedCsv, LoadedCurves,
    LoadedPoints, BANKNOTE_FILENAME, BANKNOTE_URL, CACHE_ENV_VAR,
};
pub use split::{split_indices, standardize_by};
