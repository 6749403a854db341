//! Exact arithmetic over number fields, Moebius transformations built from
//! them, quaternion-algebra unit groups, and sampling experiments on the
//! translation directions of product embeddings.

pub mod arithtest;
pub mod exactnum;
pub mod limitset;
pub mod moebius;
pub mod quaternion;
pub mod stargroup;
pub mod words;
pub mod numeric;
pub mod poly;
