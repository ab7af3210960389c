#include "drec/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "drec/errors.hpp"

namespace drec {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) {
  put_u64(out, std::bit_cast<std::uint64_t>(d));
}

double get_f64(std::istream& in) {
  return std::bit_cast<double>(get_u64(in));
}

}  // namespace

void write_checkpoint(const std::string& path, const EmbeddingState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path);
  put_u64(out, kCheckpointMagic);
  put_u64(out, kCheckpointVersion);
  put_u64(out, state.user_emb.rows());
  put_u64(out, state.item_emb.rows());
  put_u64(out, state.user_emb.cols());
  for (double v : state.user_emb.data()) put_f64(out, v);
  for (double v : state.item_emb.data()) put_f64(out, v);
  if (!out) throw DataError("short write on checkpoint " + path);
}

EmbeddingState read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  if (get_u64(in) != kCheckpointMagic)
    throw DataError("bad checkpoint magic in " + path);
  std::uint64_t version = get_u64(in);
  if (version != kCheckpointVersion)
    throw DataError("unsupported checkpoint version in " + path);
  std::uint64_t m = get_u64(in);
  std::uint64_t n = get_u64(in);
  std::uint64_t d = get_u64(in);
  EmbeddingState state;
  state.user_emb = Mat(m, d);
  state.item_emb = Mat(n, d);
  for (double& v : state.user_emb.data()) v = get_f64(in);
  for (double& v : state.item_emb.data()) v = get_f64(in);
  if (!in) throw DataError("truncated checkpoint " + path);
  return state;
}

}  // namespace drec
