#include "sleepnet/serialize.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace sleepnet {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'S', 'N', 'E', 'T'};
constexpr std::uint32_t kBinaryVersion = 1;

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const std::string& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw ParseError(path + ": truncated at byte " + std::to_string(in.tellg()));
  return v;
}

void check_network(const Network& net, const std::string& path) {
  if (net.arch.size() < 2 || net.weights.size() != net.arch.size() - 1)
    throw ParseError(path + ": inconsistent network layout");
  for (std::size_t l = 0; l < net.weights.size(); ++l)
    if (net.weights[l].rows() != net.arch[l + 1] || net.weights[l].cols() != net.arch[l])
      throw ParseError(path + ": weight matrix " + std::to_string(l) + " has wrong shape");
}

}  // namespace

void save_network(const Network& net, const std::string& path) {
  if (has_suffix(path, ".json")) {
    json j{{"format", "sleepnet-network"}, {"version", 1}, {"arch", net.arch}};
    json mats = json::array();
    for (const Matrix& w : net.weights) {
      json rows = json::array();
      for (std::size_t r = 0; r < w.rows(); ++r)
        rows.push_back(std::vector<double>(w.row(r), w.row(r) + w.cols()));
      mats.push_back(std::move(rows));
    }
    j["weights"] = std::move(mats);
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump() << '\n';
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out.write(kMagic, 4);
  write_raw(out, kBinaryVersion);
  write_raw(out, static_cast<std::uint32_t>(net.arch.size()));
  for (std::size_t w : net.arch) write_raw(out, static_cast<std::uint64_t>(w));
  for (const Matrix& w : net.weights)
    out.write(reinterpret_cast<const char*>(w.data().data()),
              static_cast<std::streamsize>(w.size() * sizeof(double)));
  if (!out) throw ParseError("write failed: " + path);
}

Network load_network(const std::string& path) {
  Network net;
  if (has_suffix(path, ".json")) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j = json::parse(in, nullptr, true, true);
    if (j.value("format", "") != "sleepnet-network")
      throw ParseError(path + ": not a network file");
    net.arch = j.at("arch").get<std::vector<std::size_t>>();
    for (std::size_t l = 0; l + 1 < net.arch.size(); ++l) {
      const auto& rows = j.at("weights").at(l);
      Matrix w(net.arch[l + 1], net.arch[l]);
      for (std::size_t r = 0; r < w.rows(); ++r) {
        const auto row = rows.at(r).get<std::vector<double>>();
        if (row.size() != w.cols()) throw ParseError(path + ": ragged weight row");
        std::copy(row.begin(), row.end(), w.row(r));
      }
      net.weights.push_back(std::move(w));
    }
    check_network(net, path);
    return net;
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError(path + ": bad magic (not a sleepnet network file)");
  const auto version = read_raw<std::uint32_t>(in, path);
  if (version != kBinaryVersion)
    throw ParseError(path + ": unsupported version " + std::to_string(version));
  const auto n_layers = read_raw<std::uint32_t>(in, path);
  if (n_layers < 2 || n_layers > 64) throw ParseError(path + ": implausible layer count");
  for (std::uint32_t l = 0; l < n_layers; ++l)
    net.arch.push_back(static_cast<std::size_t>(read_raw<std::uint64_t>(in, path)));
  for (std::size_t l = 0; l + 1 < net.arch.size(); ++l) {
    Matrix w(net.arch[l + 1], net.arch[l]);
    if (!in.read(reinterpret_cast<char*>(w.data().data()),
                 static_cast<std::streamsize>(w.size() * sizeof(double))))
      throw ParseError(path + ": truncated weight data at byte " +
                       std::to_string(in.tellg()));
    net.weights.push_back(std::move(w));
  }
  check_network(net, path);
  return net;
}

void save_stats(const ActivationStats& stats, const std::string& path) {
  json j{{"format", "sleepnet-stats"},
         {"version", 1},
         {"max_activation", stats.max_activation},
         {"mean_input", stats.mean_input},
         {"n_examples_seen", stats.n_examples_seen}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump() << '\n';
}

ActivationStats load_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j = json::parse(in, nullptr, true, true);
  if (j.value("format", "") != "sleepnet-stats")
    throw ParseError(path + ": not a stats file");
  ActivationStats s;
  s.max_activation = j.at("max_activation").get<Vec>();
  s.mean_input = j.at("mean_input").get<Vec>();
  s.n_examples_seen = j.at("n_examples_seen").get<std::uint64_t>();
  return s;
}

}  // namespace sleepnet
