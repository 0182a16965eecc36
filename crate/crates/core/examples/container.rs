//! Encode a buffer into a container, damage it, repair it, read it back.

use stair::container::Container;
use stair::{Method, StairCode, StairConfig};

fn main() -> anyhow::Result<()> {
    let data: Vec<u8> = (0..50_000u32).map(|i| (i ^ (i >> 7)) as u8).collect();
    let code = StairCode::new(StairConfig::new(8, 16, 2, &[1, 2], 8)?)?;
    let clean = Container::encode(code, 256, &data, Method::Upstairs)?;
    println!("{} stripes, {} bytes with header", clean.stripes(), clean.to_bytes().len());

    let mut damaged = clean.clone();
    let manifest = damaged.inject(&"chunks=0,7;sectors=3:2,5:1".parse()?, 9)?;
    println!("manifest: {}", serde_json::to_string(&manifest.stripes[0])?);

    damaged.repair(&manifest)?;
    assert_eq!(damaged.to_bytes(), clean.to_bytes());
    assert_eq!(damaged.extract()?, data);

    let mut hopeless = clean.clone();
    let manifest = hopeless.inject(&"chunks=0,1;sectors=2:3".parse()?, 9)?;
    println!("beyond coverage: {}", hopeless.repair(&manifest).unwrap_err());
    Ok(())
}
