#include "migopt/cli.hpp"

int main( int argc, char** argv )
{
  return migopt::cli::run( std::vector<std::string>( argv + 1, argv + argc ) );
}
