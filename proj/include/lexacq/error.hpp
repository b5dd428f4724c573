#ifndef LEXACQ_ERROR_HPP
#define LEXACQ_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexacq {

// Base for every error this library throws on purpose.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class argument_error : public error
{
public:
  using error::error;
};

class data_error : public error
{
public:
  using error::error;
};

class encoding_error : public error
{
public:
  encoding_error(const std::string& what, std::size_t byte_offset)
    : error(what + " at byte offset " + std::to_string(byte_offset)),
      byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
  std::size_t byte_offset_;
};

class parse_error : public error
{
public:
  parse_error(const std::string& source, std::size_t line, const std::string& what)
    : error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Interpolation over an empty map.
class undefined_map_error : public error
{
public:
  undefined_map_error() : error("bitext map is empty; interpolation undefined") {}
};

class injectivity_error : public error
{
public:
  using error::error;
};

class sampling_error : public error
{
public:
  using error::error;
};

// An artifact a stage expected is absent.
class missing_input_error : public error
{
public:
  explicit missing_input_error(const std::string& path)
    : error("missing input artifact: " + path), path_(path) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace lexacq

#endif
