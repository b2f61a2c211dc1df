#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "depnet/tensor.hpp"

namespace depnet {

// Word -> row lookup with a trailing OOV row. The matrix is a trainable
// Variable owned by the supplied ParamStore.
struct EmbeddingTable {
  std::vector<std::string> words;
  std::unordered_map<std::string, int> index;
  int dim = 0;
  Variable* table = nullptr;  // {V+1, dim}; last row is OOV

  int oov_index() const { return static_cast<int>(words.size()); }
  int lookup(const std::string& word) const;
  std::vector<int> ids(const std::vector<std::string>& tokens) const;

  static EmbeddingTable random(const std::vector<std::string>& vocab, int dim,
                               ParamStore& store, Rng& rng,
                               const std::string& name = "embedding");
  // word2vec text format: first line "V E", then "word v1 ... vE" per line.
  static EmbeddingTable from_word2vec(const std::string& path, ParamStore& store,
                                      const std::string& name = "embedding");
};

// Rows (or a single vector) -> X * W + b.
struct Dense {
  Variable* weight = nullptr;  // {in, out}
  Variable* bias = nullptr;    // {out}

  static Dense make(const std::string& name, int in, int out, ParamStore& store, Rng& rng);
  Tensor apply(Graph& g, Tensor x) const;
};

struct GruParams {
  Variable *w_z, *u_z, *b_z;
  Variable *w_r, *u_r, *b_r;
  Variable *w_h, *u_h, *b_h;
  int input = 0, hidden = 0;

  static GruParams make(const std::string& name, int input, int hidden, ParamStore& store,
                        Rng& rng);
};

// z = sig(Wz x + Uz h + bz); r = sig(Wr x + Ur h + br);
// hcand = tanh(Wh x + Uh (r*h) + bh); h' = (1-z)*h + z*hcand
Tensor gru_cell(Graph& g, Tensor x, Tensor h, const GruParams& p);

// Forward and backward GRU, states concatenated per timestep: {T, D} -> {T, 2H}.
struct BiGru {
  GruParams fwd, bwd;
  int input = 0, hidden = 0;

  static BiGru make(const std::string& name, int input, int hidden, ParamStore& store,
                    Rng& rng);
  Tensor apply(Graph& g, Tensor x_seq) const;
};

// Stack of BiGRUs. Layers past the first add a residual from their input
// (identity when widths match, learned projection otherwise).
struct StackedBiGru {
  std::vector<BiGru> layers;
  std::vector<std::optional<Dense>> residual_proj;  // per layer >= 1, when needed

  static StackedBiGru make(const std::string& name, int input,
                           const std::vector<int>& hidden_sizes, ParamStore& store,
                           Rng& rng);
  static StackedBiGru make(const std::string& name, int input, int layers, int hidden,
                           ParamStore& store, Rng& rng);
  Tensor apply(Graph& g, Tensor x_seq) const;
  int output_width() const;
};

// conv1d(window w) -> ReLU -> maxpool1d(p) -> per-timestep FC.
// {N, E} -> {(N - w + 1) / p, filters}
struct ConvBlock {
  Variable* kernel = nullptr;  // {F, w, E}
  Variable* bias = nullptr;    // {F}
  Dense fc;
  int window = 3, pool = 4, filters = 64;

  static ConvBlock make(const std::string& name, int embed_dim, int window, int pool,
                        int filters, ParamStore& store, Rng& rng);
  Tensor apply(Graph& g, Tensor x) const;
  int min_input_length() const { return window - 1 + pool; }
};

// Per-dimension softmax over time: a[t][d] = exp(tanh(h[t][d])) normalized
// over t, pooled = sum_t a[t][d] * h[t][d]. Returns (pooled {D}, weights {T, D}).
std::pair<Tensor, Tensor> attention_pool(Graph& g, Tensor h_seq);

// Additive attention with a learned context vector; scalar weight per
// timestep. Kept behind a config flag for ablation.
struct LearnedAttention {
  Dense proj;
  Variable* context = nullptr;

  static LearnedAttention make(const std::string& name, int dim, ParamStore& store,
                               Rng& rng);
  std::pair<Tensor, Tensor> apply(Graph& g, Tensor h_seq) const;  // (pooled {D}, a {T})
};

// Lookup with OOV substitution, right-padded with the OOV row to min_len.
Tensor embed_tokens(Graph& g, const EmbeddingTable& table,
                    const std::vector<std::string>& tokens, int min_len = 1);

}  // namespace depnet
