#include "depnet/layers.hpp"

#include <fstream>
#include <sstream>

#include "depnet/error.hpp"

namespace depnet {

int EmbeddingTable::lookup(const std::string& word) const {
  auto it = index.find(word);
  return it == index.end() ? oov_index() : it->second;
}

std::vector<int> EmbeddingTable::ids(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lookup(t));
  return out;
}

EmbeddingTable EmbeddingTable::random(const std::vector<std::string>& vocab, int dim,
                                      ParamStore& store, Rng& rng,
                                      const std::string& name) {
  EmbeddingTable t;
  t.words = vocab;
  t.dim = dim;
  for (size_t i = 0; i < vocab.size(); ++i) t.index[vocab[i]] = static_cast<int>(i);
  t.table = store.create_uniform(name, {static_cast<int>(vocab.size()) + 1, dim}, 0.1, rng);
  return t;
}

EmbeddingTable EmbeddingTable::from_word2vec(const std::string& path, ParamStore& store,
                                             const std::string& name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file '" + path + "'");
  long v = 0, e = 0;
  if (!(in >> v >> e) || v < 1 || e < 1)
    throw IoError("embedding file '" + path + "': bad header, expected 'V E'");
  EmbeddingTable t;
  t.dim = static_cast<int>(e);
  t.table = store.create(name, {static_cast<int>(v) + 1, static_cast<int>(e)});
  for (long i = 0; i < v; ++i) {
    std::string word;
    if (!(in >> word))
      throw IoError("embedding file '" + path + "': truncated at row " + std::to_string(i));
    t.index[word] = static_cast<int>(i);
    t.words.push_back(word);
    for (long j = 0; j < e; ++j) {
      double x;
      if (!(in >> x))
        throw IoError("embedding file '" + path + "': bad vector for '" + word + "'");
      t.table->value[static_cast<size_t>(i) * e + j] = x;
    }
  }
  return t;  // OOV row stays zero
}

Dense Dense::make(const std::string& name, int in, int out, ParamStore& store, Rng& rng) {
  Dense d;
  d.weight = store.create_xavier(name + ".W", {in, out}, in, out, rng);
  d.bias = store.create(name + ".b", {out});
  return d;
}

Tensor Dense::apply(Graph& g, Tensor x) const {
  Tensor w = g.param(*weight);
  Tensor b = g.param(*bias);
  if (x.rank() == 1) return g.add(g.matmul(x, w), b);
  return g.add_rowvec(g.matmul(x, w), b);
}

GruParams GruParams::make(const std::string& name, int input, int hidden,
                          ParamStore& store, Rng& rng) {
  GruParams p;
  p.input = input;
  p.hidden = hidden;
  auto gate = [&](const char* tag, Variable*& w, Variable*& u, Variable*& b) {
    w = store.create_xavier(name + ".W_" + tag, {hidden, input}, input, hidden, rng);
    u = store.create_xavier(name + ".U_" + tag, {hidden, hidden}, hidden, hidden, rng);
    b = store.create(name + ".b_" + tag, {hidden});
  };
  gate("z", p.w_z, p.u_z, p.b_z);
  gate("r", p.w_r, p.u_r, p.b_r);
  gate("h", p.w_h, p.u_h, p.b_h);
  return p;
}

Tensor gru_cell(Graph& g, Tensor x, Tensor h, const GruParams& p) {
  if (x.rank() != 1 || x.shape()[0] != p.input)
    throw InvalidArgument("gru_cell: input " + shape_str(x.shape()) + ", expected {" +
                          std::to_string(p.input) + "}");
  if (h.rank() != 1 || h.shape()[0] != p.hidden)
    throw InvalidArgument("gru_cell: state " + shape_str(h.shape()) + ", expected {" +
                          std::to_string(p.hidden) + "}");
  Tensor z = g.sigmoid(g.add(g.add(g.matmul(g.param(*p.w_z), x), g.matmul(g.param(*p.u_z), h)),
                             g.param(*p.b_z)));
  Tensor r = g.sigmoid(g.add(g.add(g.matmul(g.param(*p.w_r), x), g.matmul(g.param(*p.u_r), h)),
                             g.param(*p.b_r)));
  Tensor cand = g.tanh(g.add(
      g.add(g.matmul(g.param(*p.w_h), x), g.matmul(g.param(*p.u_h), g.mul(r, h))),
      g.param(*p.b_h)));
  Tensor keep = g.add_const(g.scale(z, -1.0), 1.0);  // 1 - z
  return g.add(g.mul(keep, h), g.mul(z, cand));
}

BiGru BiGru::make(const std::string& name, int input, int hidden, ParamStore& store,
                  Rng& rng) {
  BiGru b;
  b.input = input;
  b.hidden = hidden;
  b.fwd = GruParams::make(name + ".fwd", input, hidden, store, rng);
  b.bwd = GruParams::make(name + ".bwd", input, hidden, store, rng);
  return b;
}

Tensor BiGru::apply(Graph& g, Tensor x_seq) const {
  if (x_seq.rank() != 2 || x_seq.shape()[0] < 1)
    throw InvalidArgument("bigru: expected a non-empty {T, D} sequence, got " +
                          shape_str(x_seq.shape()));
  const int t_len = x_seq.shape()[0];
  std::vector<Tensor> fwd_states(t_len), bwd_states(t_len);
  Tensor h = g.zeros({hidden});
  for (int t = 0; t < t_len; ++t) {
    h = gru_cell(g, g.slice_row(x_seq, t), h, fwd);
    fwd_states[t] = h;
  }
  h = g.zeros({hidden});
  for (int t = t_len - 1; t >= 0; --t) {
    h = gru_cell(g, g.slice_row(x_seq, t), h, bwd);
    bwd_states[t] = h;
  }
  std::vector<Tensor> rows(t_len);
  for (int t = 0; t < t_len; ++t)
    rows[t] = g.concat({fwd_states[t], bwd_states[t]}, 0);
  return g.stack_rows(rows);
}

StackedBiGru StackedBiGru::make(const std::string& name, int input,
                                const std::vector<int>& hidden_sizes, ParamStore& store,
                                Rng& rng) {
  if (hidden_sizes.empty()) throw InvalidArgument("stacked_bigru: needs >= 1 layer");
  StackedBiGru s;
  int width = input;
  for (size_t l = 0; l < hidden_sizes.size(); ++l) {
    s.layers.push_back(
        BiGru::make(name + ".l" + std::to_string(l), width, hidden_sizes[l], store, rng));
    int out_width = 2 * hidden_sizes[l];
    if (l >= 1 && width != out_width) {
      s.residual_proj.push_back(Dense::make(name + ".res" + std::to_string(l), width,
                                            out_width, store, rng));
    } else {
      s.residual_proj.push_back(std::nullopt);
    }
    width = out_width;
  }
  return s;
}

StackedBiGru StackedBiGru::make(const std::string& name, int input, int layers, int hidden,
                                ParamStore& store, Rng& rng) {
  return make(name, input, std::vector<int>(static_cast<size_t>(layers), hidden), store,
              rng);
}

Tensor StackedBiGru::apply(Graph& g, Tensor x_seq) const {
  Tensor h = x_seq;
  for (size_t l = 0; l < layers.size(); ++l) {
    Tensor out = layers[l].apply(g, h);
    if (l >= 1) {
      Tensor res = residual_proj[l] ? residual_proj[l]->apply(g, h) : h;
      out = g.add(out, res);
    }
    h = out;
  }
  return h;
}

int StackedBiGru::output_width() const { return 2 * layers.back().hidden; }

ConvBlock ConvBlock::make(const std::string& name, int embed_dim, int window, int pool,
                          int filters, ParamStore& store, Rng& rng) {
  ConvBlock c;
  c.window = window;
  c.pool = pool;
  c.filters = filters;
  c.kernel = store.create_xavier(name + ".kernel", {filters, window, embed_dim},
                                 window * embed_dim, filters, rng);
  c.bias = store.create(name + ".bias", {filters});
  c.fc = Dense::make(name + ".fc", filters, filters, store, rng);
  return c;
}

Tensor ConvBlock::apply(Graph& g, Tensor x) const {
  if (x.rank() != 2 || x.shape()[0] < window)
    throw InvalidArgument("cnn_block: input " + shape_str(x.shape()) +
                          " shorter than window " + std::to_string(window));
  Tensor conv = g.conv1d(x, g.param(*kernel), g.param(*bias));
  Tensor act = g.relu(conv);
  Tensor pooled = g.maxpool1d(act, pool);
  return fc.apply(g, pooled);
}

std::pair<Tensor, Tensor> attention_pool(Graph& g, Tensor h_seq) {
  if (h_seq.rank() != 2 || h_seq.shape()[0] < 1)
    throw InvalidArgument("attention: expected a non-empty {T, D} sequence");
  Tensor u = g.tanh(h_seq);
  Tensor a = g.softmax(u, 0);  // normalized over time, per dimension
  Tensor pooled = g.sum_axis(g.mul(a, h_seq), 0);
  return {pooled, a};
}

LearnedAttention LearnedAttention::make(const std::string& name, int dim, ParamStore& store,
                                        Rng& rng) {
  LearnedAttention att;
  att.proj = Dense::make(name + ".proj", dim, dim, store, rng);
  att.context = store.create_xavier(name + ".context", {dim}, dim, 1, rng);
  return att;
}

std::pair<Tensor, Tensor> LearnedAttention::apply(Graph& g, Tensor h_seq) const {
  Tensor u = g.tanh(proj.apply(g, h_seq));           // {T, D}
  Tensor scores = g.matmul(u, g.param(*context));    // {T}
  Tensor a = g.softmax(scores, 0);
  Tensor pooled = g.matmul(a, h_seq);                // {D}
  return {pooled, a};
}

Tensor embed_tokens(Graph& g, const EmbeddingTable& table,
                    const std::vector<std::string>& tokens, int min_len) {
  if (tokens.empty()) throw InvalidArgument("embed_tokens: empty token sequence");
  std::vector<int> ids = table.ids(tokens);
  while (static_cast<int>(ids.size()) < min_len) ids.push_back(table.oov_index());
  return g.embedding_lookup(g.param(*table.table), ids);
}

}  // namespace depnet
