#include "cudseq/digit_io.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <string>

namespace cudseq {

namespace {

void write_header(std::ostream& out, std::uint32_t base, unsigned order, u128 len) {
  out << "# base=" << base << " order=" << order << " len=" << to_string(len) << '\n';
}

void put_le(std::ostream& out, std::uint64_t value, int bytes) {
  std::array<char, 8> buf{};
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(buf.data(), bytes);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), bytes);
  if (in.gcount() != bytes) throw InputError("truncated binary digit stream");
  std::uint64_t value = 0;
  for (int i = bytes - 1; i >= 0; --i) value = (value << 8) | buf[i];
  return value;
}

std::uint64_t parse_field(const std::string& header, const std::string& key) {
  const auto at = header.find(key + "=");
  if (at == std::string::npos) throw InputError("digit header lacks '" + key + "='");
  const char* first = header.data() + at + key.size() + 1;
  const char* last = header.data() + header.size();
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) throw InputError("bad '" + key + "' in digit header");
  return value;
}

}  // namespace

void write_digits_text(std::ostream& out, FordStream& stream) {
  write_header(out, stream.base(), stream.order(), stream.size());
  while (auto d = stream.next()) out << *d << '\n';
}

void write_digits_text(std::ostream& out, const DigitSeq& seq, Order order) {
  write_header(out, seq.base, order.value(), seq.size());
  for (Digit d : seq.digits) out << d << '\n';
}

TextDigits read_digits_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0) {
    throw InputError("digit text must start with a '# base=.. order=.. len=..' header");
  }
  TextDigits result;
  result.seq.base = static_cast<std::uint32_t>(parse_field(header, "base"));
  result.order = static_cast<unsigned>(parse_field(header, "order"));
  const std::uint64_t len = parse_field(header, "len");
  if (result.seq.base == 0) throw InputError("digit header has base 0");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Digit d = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), d);
    if (ec != std::errc{} || ptr != line.data() + line.size()) {
      throw InputError("bad digit line '" + line + "'");
    }
    if (d >= result.seq.base) throw InputError("digit " + line + " out of range for base");
    result.seq.digits.push_back(d);
  }
  if (result.seq.digits.size() != len) {
    throw InputError("digit count " + std::to_string(result.seq.digits.size()) +
                     " does not match header len " + std::to_string(len));
  }
  return result;
}

void write_digits_binary(std::ostream& out, FordStream& stream) {
  out.write(kBinaryMagic, 4);
  out.put(static_cast<char>(kBinaryVersion));
  put_le(out, stream.base(), 8);
  put_le(out, to_u64(stream.size(), "digit count"), 8);
  while (auto d = stream.next()) put_le(out, *d, 4);
}

void write_digits_binary(std::ostream& out, const DigitSeq& seq) {
  out.write(kBinaryMagic, 4);
  out.put(static_cast<char>(kBinaryVersion));
  put_le(out, seq.base, 8);
  put_le(out, seq.size(), 8);
  for (Digit d : seq.digits) put_le(out, d, 4);
}

DigitSeq read_digits_binary(std::istream& in) {
  std::array<char, 5> head{};
  in.read(head.data(), 5);
  if (in.gcount() != 5 || std::string_view(head.data(), 4) != std::string_view(kBinaryMagic, 4)) {
    throw InputError("not a CUDS binary digit stream");
  }
  if (static_cast<std::uint8_t>(head[4]) != kBinaryVersion) {
    throw InputError("unsupported CUDS version " + std::to_string(static_cast<unsigned char>(head[4])));
  }
  const std::uint64_t base = get_le(in, 8);
  const std::uint64_t count = get_le(in, 8);
  if (base == 0 || base > UINT32_MAX) throw InputError("CUDS base out of range");
  DigitSeq seq{static_cast<std::uint32_t>(base), {}};
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto d = static_cast<Digit>(get_le(in, 4));
    if (d >= base) throw InputError("CUDS digit out of range for base");
    seq.digits.push_back(d);
  }
  return seq;
}

}  // namespace cudseq
