use clap::Parser;

#[derive(Parser)]
#[command(name = "spherilink-service", version, about = "JSON endpoints for spherilink")]
struct Args {
    /// Port to listen on.
    #[arg(long, env = "SPHERILINK_PORT", default_value_t = 8787)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let listener = tokio::net::TcpListener::bind((args.host, args.port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, spherilink_service::router()).await?;
    Ok(())
}
