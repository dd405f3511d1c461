#include "vpnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>
#include <zlib.h>

#include "vpnn/error.hpp"

namespace vpnn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'V', 'P', 'N', 'N', 'C', 'K', 'P', 'T'};

template <class T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void read_doubles(double* dst, std::size_t n) {
    if (n > (end_ - pos_) / sizeof(double)) truncated();
    std::memcpy(dst, bytes_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }

  bool done() const { return pos_ == end_; }

 private:
  void need(std::size_t n) {
    if (n > end_ - pos_) truncated();
  }
  [[noreturn]] static void truncated() {
    throw Error(ErrorKind::Parse, "checkpoint is truncated");
  }

  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const std::string& bytes, std::size_t len) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(len)));
}

std::vector<const Matrix*> planes_of(const Model& m) {
  return std::visit(
      [](const auto& net) {
        return parameter_planes(net);
      },
      m.network);
}

}  // namespace

std::string checkpoint_serialize(const ModelCheckpoint& ckpt) {
  ckpt.model.validate();
  nlohmann::json meta;
  meta["model"] = std::string(to_string(ckpt.model.kind));
  meta["transform"] = std::string(to_string(ckpt.model.transform()));
  meta["color_n"] = ckpt.model.color.n;
  meta["bins"] = ckpt.model.bins;
  meta["hidden_width"] = ckpt.model.hidden_width;
  meta["hidden_layers"] = ckpt.model.hidden_layers;
  meta["widths"] = ckpt.model.widths();
  meta["normalization"] = ckpt.normalization;
  meta["epochs"] = ckpt.epochs;
  meta["final_loss"] =
      ckpt.final_loss ? nlohmann::json(*ckpt.final_loss) : nlohmann::json();
  meta["loss_history"] = ckpt.loss_history;
  meta["seed"] = ckpt.seed;
  const std::string meta_text = meta.dump();

  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(meta_text.size()));
  out += meta_text;
  const auto planes = planes_of(ckpt.model);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(planes.size()));
  for (const Matrix* p : planes) {
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->cols()));
    out.append(reinterpret_cast<const char*>(p->data()),
               static_cast<std::size_t>(p->size()) * sizeof(double));
  }
  put<std::uint32_t>(out, crc_of(out, out.size()));
  return out;
}

ModelCheckpoint checkpoint_deserialize(const std::string& bytes,
                                       std::optional<ModelKind> expected) {
  constexpr std::size_t kMinSize = sizeof kMagic + 4 + 4 + 4 + 4;
  const bool magic_ok =
      bytes.size() >= sizeof kMagic &&
      std::memcmp(bytes.data(), kMagic, sizeof kMagic) == 0;
  if (bytes.size() < kMinSize) {
    throw Error(ErrorKind::Parse, magic_ok ? "checkpoint is truncated"
                                           : "not a checkpoint file");
  }
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + body, 4);
  if (crc_of(bytes, body) != stored_crc) {
    if (!magic_ok) throw Error(ErrorKind::Parse, "not a checkpoint file");
    throw Error(ErrorKind::Checksum,
                "checkpoint checksum mismatch (file corrupted or truncated)");
  }
  if (!magic_ok) throw Error(ErrorKind::Parse, "not a checkpoint file");

  Reader r(bytes, body);
  r.get_string(sizeof kMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::Version,
                "checkpoint version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kCheckpointVersion) + ")");
  }
  const auto meta_len = r.get<std::uint32_t>();
  nlohmann::json meta;
  ModelCheckpoint ckpt;
  std::vector<Index> stored_widths;
  try {
    meta = nlohmann::json::parse(r.get_string(meta_len));
    ckpt.model.kind = parse_model_kind(meta.at("model").get<std::string>());
    ckpt.model.color.n = meta.at("color_n").get<double>();
    ckpt.model.bins = meta.at("bins").get<Index>();
    ckpt.model.hidden_width = meta.at("hidden_width").get<Index>();
    ckpt.model.hidden_layers = meta.at("hidden_layers").get<Index>();
    ckpt.normalization = meta.at("normalization").get<std::string>();
    ckpt.epochs = meta.at("epochs").get<int>();
    if (!meta.at("final_loss").is_null()) {
      ckpt.final_loss = meta.at("final_loss").get<double>();
    }
    ckpt.loss_history = meta.at("loss_history").get<std::vector<double>>();
    ckpt.seed = meta.at("seed").get<std::uint64_t>();
    stored_widths = meta.at("widths").get<std::vector<Index>>();
    if (meta.at("transform").get<std::string>() !=
        to_string(ckpt.model.transform())) {
      throw Error(ErrorKind::Parse, "transform does not match model");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("checkpoint metadata: ") + e.what());
  }

  if (ckpt.model.bins < 1 || ckpt.model.hidden_width < 1 ||
      ckpt.model.hidden_layers < 1) {
    throw Error(ErrorKind::Parse, "checkpoint architecture is malformed");
  }
  if (expected && *expected != ckpt.model.kind) {
    throw Error(ErrorKind::Config,
                "checkpoint holds a " + std::string(to_string(ckpt.model.kind)) +
                    " model, not " + std::string(to_string(*expected)));
  }

  const auto widths = ckpt.model.widths();
  if (widths != stored_widths) {
    throw Error(ErrorKind::Parse, "checkpoint widths disagree with architecture");
  }
  auto read_plane = [&r](Index rows, Index cols) {
    const auto stored_rows = r.get<std::uint64_t>();
    const auto stored_cols = r.get<std::uint64_t>();
    if (stored_rows != static_cast<std::uint64_t>(rows) ||
        stored_cols != static_cast<std::uint64_t>(cols)) {
      throw Error(ErrorKind::Parse, "checkpoint plane has unexpected shape");
    }
    Matrix m(rows, cols);
    r.read_doubles(m.data(), static_cast<std::size_t>(m.size()));
    return m;
  };

  const std::size_t depth = widths.size() - 1;
  const int planes_per_layer = is_vector_model(ckpt.model.kind) ? 6 : 2;
  const auto count = r.get<std::uint32_t>();
  if (count != depth * planes_per_layer) {
    throw Error(ErrorKind::Parse, "checkpoint plane count does not match model");
  }
  if (is_vector_model(ckpt.model.kind)) {
    VPNetwork net;
    for (std::size_t l = 0; l < depth; ++l) {
      const Index out = widths[l + 1], in = widths[l];
      Matrix w1 = read_plane(out, in), w2 = read_plane(out, in),
             w3 = read_plane(out, in);
      Matrix b1 = read_plane(out, 1), b2 = read_plane(out, 1),
             b3 = read_plane(out, 1);
      net.layers.push_back(
          {VecMatrix(std::move(w1), std::move(w2), std::move(w3)),
           VecMatrix(std::move(b1), std::move(b2), std::move(b3))});
    }
    ckpt.model.network = std::move(net);
  } else {
    RealNetwork net;
    net.kind = ckpt.model.kind;
    for (std::size_t l = 0; l < depth; ++l) {
      Matrix w = read_plane(widths[l + 1], widths[l]);
      Matrix b = read_plane(widths[l + 1], 1);
      net.layers.push_back({std::move(w), std::move(b)});
    }
    ckpt.model.network = std::move(net);
  }
  if (!r.done()) {
    throw Error(ErrorKind::Parse, "trailing bytes after checkpoint planes");
  }
  ckpt.model.validate();
  return ckpt;
}

void checkpoint_save(const std::filesystem::path& path,
                     const ModelCheckpoint& ckpt) {
  const std::string bytes = checkpoint_serialize(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

ModelCheckpoint checkpoint_load(const std::filesystem::path& path,
                                std::optional<ModelKind> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return checkpoint_deserialize(bytes, expected);
}

}  // namespace vpnn
