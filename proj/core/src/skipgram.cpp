// Skip-gram with negative sampling, trained by plain SGD.
//
// For each position the centre word's input vector is trained to score its
// window neighbours (label 1) above `negative_samples` draws from the
// unigram^0.75 noise distribution (label 0) under the logistic loss. Output
// vectors start at zero and input vectors uniformly in [-0.5/d, 0.5/d).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "wvenrich/embedding.hpp"
#include "wvenrich/error.hpp"
#include "wvenrich/rng.hpp"

namespace wvenrich {

namespace {

constexpr double kNoisePower = 0.75;
constexpr double kMinRateFraction = 1e-4;
constexpr double kMaxExp = 30.0;

double sigmoid(double x) {
  x = std::clamp(x, -kMaxExp, kMaxExp);
  return 1.0 / (1.0 + std::exp(-x));
}

class NoiseSampler {
 public:
  explicit NoiseSampler(std::span<const std::uint64_t> counts) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), kNoisePower);
      cumulative_.push_back(total);
    }
    for (auto& c : cumulative_) c /= total;
    cumulative_.back() = 1.0;
  }

  std::uint32_t draw(Rng& rng) const {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(),
                               rng.uniform());
    return static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                 static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
  }

 private:
  std::vector<double> cumulative_;
};

// Element access for the weight buffers. Multi-worker training shares the
// buffers between threads, so it goes through relaxed atomics; each
// read-modify-write may still interleave with other workers.
template <bool Shared>
struct Cell {
  static float load(float& x) {
    if constexpr (Shared) {
      return std::atomic_ref<float>(x).load(std::memory_order_relaxed);
    } else {
      return x;
    }
  }
  static void store(float& x, float v) {
    if constexpr (Shared) {
      std::atomic_ref<float>(x).store(v, std::memory_order_relaxed);
    } else {
      x = v;
    }
  }
};

struct Weights {
  std::size_t dim;
  std::vector<float> input;
  std::vector<float> output;
};

template <bool Shared>
void train_pair(Weights& w, std::uint32_t center, std::uint32_t context,
                const NoiseSampler& noise, std::size_t negatives, double rate,
                Rng& rng, std::vector<double>& grad) {
  using C = Cell<Shared>;
  const std::size_t dim = w.dim;
  float* in = w.input.data() + static_cast<std::size_t>(center) * dim;
  std::fill(grad.begin(), grad.end(), 0.0);

  for (std::size_t s = 0; s <= negatives; ++s) {
    std::uint32_t target;
    double label;
    if (s == 0) {
      target = context;
      label = 1.0;
    } else {
      target = noise.draw(rng);
      if (target == context) continue;
      label = 0.0;
    }
    float* out = w.output.data() + static_cast<std::size_t>(target) * dim;
    // Four partial sums keep the loop off the add-latency chain.
    double part[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
      for (std::size_t u = 0; u < 4; ++u) {
        part[u] += static_cast<double>(C::load(in[i + u])) * C::load(out[i + u]);
      }
    }
    for (; i < dim; ++i) {
      part[0] += static_cast<double>(C::load(in[i])) * C::load(out[i]);
    }
    const double dot = (part[0] + part[1]) + (part[2] + part[3]);
    const double g = (label - sigmoid(dot)) * rate;
    for (std::size_t i = 0; i < dim; ++i) {
      const float o = C::load(out[i]);
      grad[i] += g * o;
      C::store(out[i], static_cast<float>(o + g * C::load(in[i])));
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    C::store(in[i], static_cast<float>(C::load(in[i]) + grad[i]));
  }
}

template <bool Shared>
void train_sentences(Weights& w,
                     std::span<const std::vector<std::uint32_t>> sentences,
                     const SkipgramParams& p, const NoiseSampler& noise,
                     std::uint64_t seed, std::size_t epoch,
                     std::uint64_t words_in_chunk) {
  Rng rng(seed);
  std::vector<double> grad(w.dim);
  const auto window = static_cast<std::ptrdiff_t>(p.window);
  std::uint64_t done = 0;
  for (const auto& sentence : sentences) {
    const auto len = static_cast<std::ptrdiff_t>(sentence.size());
    for (std::ptrdiff_t i = 0; i < len; ++i, ++done) {
      const double progress =
          (static_cast<double>(epoch) +
           static_cast<double>(done) / static_cast<double>(words_in_chunk)) /
          static_cast<double>(p.epochs);
      const double rate = p.initial_learning_rate *
                          (1.0 - (1.0 - kMinRateFraction) * progress);
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + window);
      for (std::ptrdiff_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        train_pair<Shared>(w, sentence[static_cast<std::size_t>(i)],
                           sentence[static_cast<std::size_t>(j)], noise,
                           p.negative_samples, rate, rng, grad);
      }
    }
  }
}

std::uint64_t count_words(std::span<const std::vector<std::uint32_t>> s) {
  std::uint64_t n = 0;
  for (const auto& x : s) n += x.size();
  return n;
}

}  // namespace

EmbeddingModel train_skipgram(
    std::span<const std::vector<std::string>> sentences,
    const SkipgramParams& params) {
  params.validate();

  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s) ++counts[t];
  }
  std::vector<std::pair<std::string_view, std::uint64_t>> vocab;
  for (const auto& [t, c] : counts) {
    if (c >= params.min_count) vocab.emplace_back(t, c);
  }
  if (vocab.empty()) {
    throw InvalidArgument("no token reaches min_count " +
                          std::to_string(params.min_count));
  }
  std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_map<std::string_view, std::uint32_t> index;
  std::vector<std::uint64_t> freq;
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    index.emplace(vocab[i].first, i);
    freq.push_back(vocab[i].second);
  }

  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(sentences.size());
  for (const auto& s : sentences) {
    std::vector<std::uint32_t> ids;
    for (const auto& t : s) {
      if (auto it = index.find(t); it != index.end()) ids.push_back(it->second);
    }
    if (ids.size() > 1) encoded.push_back(std::move(ids));
  }

  const std::size_t dim = params.dimension;
  Weights w{dim, std::vector<float>(vocab.size() * dim),
            std::vector<float>(vocab.size() * dim, 0.0f)};
  Rng init(derive_seed(params.seed, 0));
  for (auto& x : w.input) {
    x = static_cast<float>((init.uniform() - 0.5) / static_cast<double>(dim));
  }

  const NoiseSampler noise(freq);
  const std::size_t workers = std::min(params.workers, std::max<std::size_t>(encoded.size(), 1));
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    if (workers == 1) {
      const auto words = std::max<std::uint64_t>(count_words(encoded), 1);
      train_sentences<false>(w, encoded, params, noise,
                             derive_seed(params.seed, epoch + 1), epoch, words);
      continue;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (encoded.size() + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(encoded.size(), t * chunk);
      const std::size_t end = std::min(encoded.size(), begin + chunk);
      auto part = std::span<const std::vector<std::uint32_t>>(encoded).subspan(
          begin, end - begin);
      pool.emplace_back([&, part, t] {
        const auto words = std::max<std::uint64_t>(count_words(part), 1);
        train_sentences<true>(
            w, part, params, noise,
            derive_seed(params.seed, (epoch + 1) * 1000003ULL + t), epoch,
            words);
      });
    }
  }

  EmbeddingModel model(dim);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    model.add(std::string(vocab[i].first),
              std::span<const float>(w.input).subspan(i * dim, dim));
  }
  model.set_training_params(params);
  return model;
}

}  // namespace wvenrich
