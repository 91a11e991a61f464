# zerocap/commands
