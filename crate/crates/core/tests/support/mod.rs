pub mod oracle;
pub mod running_example;
