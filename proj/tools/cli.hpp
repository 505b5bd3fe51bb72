#pragma once
#include <iosfwd>
#include <string>
#include <vector>
namespace covert::cli {
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
}
