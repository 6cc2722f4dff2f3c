#include "gentrans/emit.hpp"

#include <algorithm>

namespace gentrans {

std::size_t unit_size(SizeCode code) {
  switch (code) {
    case SizeCode::Byte: return 1;
    case SizeCode::Word: return 2;
    case SizeCode::Dword: return 4;
    case SizeCode::Pword: return 6;
    case SizeCode::Qword: return 8;
  }
  return 1;
}

std::optional<SizeCode> size_code_from_letter(char letter) {
  switch (letter) {
    case 'b': return SizeCode::Byte;
    case 'w': return SizeCode::Word;
    case 'd': return SizeCode::Dword;
    case 'p': return SizeCode::Pword;
    case 'q': return SizeCode::Qword;
    default: return std::nullopt;
  }
}

namespace {

constexpr std::uint64_t kMaxImage = std::uint64_t{1} << 30;

void check_range(std::int64_t v, std::size_t size, const SourcePos& pos) {
  if (size >= 8) return;
  const int bits = static_cast<int>(size * 8);
  const std::int64_t lo = -(std::int64_t{1} << (bits - 1));
  const std::int64_t hi = (std::int64_t{1} << bits) - 1;
  if (v < lo || v > hi) {
    throw Error(ErrorKind::Evaluation,
                "value " + std::to_string(v) + " does not fit in " + std::to_string(size) + " byte(s)", pos);
  }
}

void put_unit(EmitImage& image, std::int64_t v, std::size_t size, const EmitOptions& options, const SourcePos& pos) {
  if (options.strict_overflow) check_range(v, size, pos);
  const auto u = static_cast<std::uint64_t>(v);
  const std::size_t at = image.bytes.size();
  image.bytes.resize(at + size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto byte = static_cast<std::uint8_t>((u >> (8 * i)) & 0xFF);
    const std::size_t slot = options.endian == Endian::Little ? i : size - 1 - i;
    image.bytes[at + slot] = byte;
  }
}

}  // namespace

void emit_data(EmitImage& image, SizeCode code, std::span<const DataItem> values, const EmitOptions& options,
               const SourcePos& pos) {
  const std::size_t size = unit_size(code);
  for (const DataItem& item : values) {
    if (!item) {
      put_unit(image, 0, size, options, pos);
      continue;
    }
    if (item->is_string()) {
      if (code != SizeCode::Byte) {
        throw Error(ErrorKind::Evaluation, "string values are only allowed with byte units", pos);
      }
      const std::string& s = item->as_string();
      image.bytes.insert(image.bytes.end(), s.begin(), s.end());
      continue;
    }
    put_unit(image, item->as_int(), size, options, pos);
  }
}

void reserve_data(EmitImage& image, SizeCode code, std::int64_t count, const std::optional<Value>& fill,
                  const EmitOptions& options, const SourcePos& pos) {
  if (count < 0) throw Error(ErrorKind::Evaluation, "negative reservation count " + std::to_string(count), pos);
  std::int64_t v = 0;
  if (fill) {
    if (!fill->is_int()) throw Error(ErrorKind::Evaluation, "reservation fill must be an integer", pos);
    v = fill->as_int();
  }
  const std::size_t size = unit_size(code);
  if (static_cast<std::uint64_t>(count) > kMaxImage ||
      static_cast<std::uint64_t>(count) * size > kMaxImage - std::min(kMaxImage, image.bytes.size())) {
    throw Error(ErrorKind::Evaluation, "reservation of " + std::to_string(count) + " units exceeds the image limit", pos);
  }
  image.bytes.reserve(image.bytes.size() + static_cast<std::size_t>(count) * size);
  for (std::int64_t i = 0; i < count; ++i) put_unit(image, v, size, options, pos);
}

void define_label(EmitImage& image, const std::string& name, const SourcePos& pos) {
  auto [it, inserted] = image.labels.emplace(name, static_cast<std::int64_t>(image.cursor()));
  if (!inserted) throw Error(ErrorKind::Syntax, "duplicate label '" + name + "'", pos);
}

}  // namespace gentrans
