// Writes a planted-signal bill corpus as JSONL.
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lobbyml/error.hpp"
#include "lobbyml/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic bill corpus"};
  lobbyml::SyntheticParams params;
  std::string out;
  app.add_option("--out", out, "Output JSONL path")->required();
  app.add_option("--docs", params.n_docs, "Number of documents");
  app.add_option("--seed", params.seed, "Random seed")->required();
  app.add_option("--signal-scale", params.signal_scale, "Per-token signal rate per unit of ln(1 + count)");
  app.add_option("--unlabeled-fraction", params.unlabeled_fraction, "Share of documents with unknown counts");
  app.add_option("--min-tokens", params.min_tokens, "Shortest document");
  app.add_option("--max-tokens", params.max_tokens, "Longest document");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    lobbyml::write_jsonl(lobbyml::generate_synthetic_corpus(params).documents, out);
    return 0;
  } catch (const lobbyml::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
