use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::net::TcpStream;

use crate::error::{Error, Result};

/// Opens an NDJSON input: `-` for stdin, `tcp://host:port` for a socket,
/// anything else as a file path.
pub fn open_source(spec: &str) -> Result<Box<dyn BufRead>> {
    if spec == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    if let Some(addr) = spec.strip_prefix("tcp://") {
        let stream = TcpStream::connect(addr).map_err(|e| Error::io(spec, e))?;
        return Ok(Box::new(BufReader::new(stream)));
    }
    let f = File::open(spec).map_err(|e| Error::io(spec, e))?;
    Ok(Box::new(BufReader::new(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ReadOptions, RecordReader};
    use std::io::Write;
    use std::net::TcpListener;

    #[test]
    fn reads_records_over_tcp() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let server = std::thread::spawn(move || {
            let (mut s, _) = listener.accept().unwrap();
            s.write_all(b"{\"id\":\"1\",\"text\":\"autism\"}\n{\"id\":\"2\",\"text\":\"tea\"}\n")
                .unwrap();
        });
        let src = open_source(&format!("tcp://{addr}")).unwrap();
        let recs: Vec<_> = RecordReader::new(src, ReadOptions::default())
            .collect::<Result<_>>()
            .unwrap();
        server.join().unwrap();
        assert_eq!(recs.len(), 2);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(open_source("/nonexistent/x.ndjson"), Err(Error::Io { .. })));
    }
}
