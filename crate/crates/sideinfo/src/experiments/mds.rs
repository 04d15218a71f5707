use rayon::prelude::*;
use serde_json::json;
use sideinfo_core::mds::{pack, rate_report, Field, MaskedBlock, MdsCoder};
use sideinfo_core::transform::mask_string;

use crate::config::MdsDemo;
use crate::error::{CliError, Result};
use crate::output::{Artifacts, Cell, Check, Table};

fn hex_symbols(symbols: &[u8], m: u32) -> String {
    let width = m.div_ceil(4) as usize;
    symbols.iter().map(|s| format!("{s:0width$x}")).collect()
}

fn hex_bytes(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_mask(mask: &str) -> Result<Vec<bool>> {
    mask.chars()
        .map(|c| match c {
            '1' => Ok(true),
            '0' => Ok(false),
            _ => Err(CliError::Config(format!("mask `{mask}` is not a bitstring"))),
        })
        .collect()
}

struct Outcome {
    row: Vec<Cell>,
    mismatches: u64,
}

fn code(coder: &MdsCoder, index: u64, source: &str, block: &MaskedBlock) -> Result<Outcome> {
    let m = coder.field().m();
    let poly = coder.encode(block)?;
    let decoded = coder.reconstruct(&poly)?;
    let mismatches = block
        .mask
        .iter()
        .zip(block.symbols.iter().zip(&decoded))
        .filter(|(keep, (a, b))| **keep && a != b)
        .count() as u64;
    Ok(Outcome {
        row: vec![
            index.into(),
            source.into(),
            mask_string(&block.mask).into(),
            hex_symbols(&block.symbols, m).into(),
            hex_bytes(&pack(&poly.coefficients, m)).into(),
            hex_symbols(&decoded, m).into(),
            mismatches.into(),
        ],
        mismatches,
    })
}

pub fn mds_demo(cfg: &MdsDemo, seed: u64) -> Result<Artifacts> {
    let field = Field::new(cfg.m)?;
    let polynomial = field.polynomial();
    let coder = MdsCoder::new(field, cfg.n, cfg.k)?;
    let m = cfg.m;
    let explicit = cfg
        .blocks
        .iter()
        .map(|b| {
            let symbols = b
                .symbols
                .iter()
                .map(|&s| coder.field().check(s))
                .collect::<std::result::Result<Vec<u8>, _>>()?;
            Ok(coder.block(symbols, parse_mask(&b.mask)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut outcomes = explicit
        .iter()
        .enumerate()
        .map(|(i, b)| code(&coder, i as u64, "explicit", b))
        .collect::<Result<Vec<_>>>()?;
    let random = (0..cfg.trials)
        .into_par_iter()
        .map(|t| code(&coder, t, "random", &coder.random_block(seed, t)))
        .collect::<Result<Vec<_>>>()?;
    outcomes.extend(random);

    let mut table = Table::new(&[
        "block",
        "source",
        "mask",
        "symbols",
        "payload",
        "decoded",
        "mismatches",
    ]);
    let mut mismatches = 0;
    for o in outcomes {
        mismatches += o.mismatches;
        table.push(o.row);
    }
    let rates = rate_report(cfg.n, cfg.k, m)?;
    let payload_bits = coder.payload_bits();
    let blocks = explicit.len() as u64 + cfg.trials;
    let checks = vec![
        Check::at_most("relevant-position mismatches", mismatches as f64, 0.0, true),
        Check::at_most(
            "payload bits above k*m",
            payload_bits as f64 - (cfg.k as f64 * f64::from(m)),
            0.0,
            true,
        ),
    ];
    let summary = json!({
        "n": cfg.n,
        "k": cfg.k,
        "m": m,
        "field_polynomial": format!("{polynomial:#x}"),
        "points": hex_symbols(coder.points(), m),
        "blocks": blocks,
        "mismatches": mismatches,
        "payload_bits": payload_bits,
        "packed_bytes": pack(&vec![0; cfg.k], m).len(),
        "rates_bits_per_block": {
            "scheme": rates.scheme,
            "ignore": rates.ignore,
            "tell_decoder": rates.tell_decoder,
        },
        "cheapest_first": rates.ordering(),
    });
    Ok(Artifacts {
        table,
        summary,
        checks,
    })
}
