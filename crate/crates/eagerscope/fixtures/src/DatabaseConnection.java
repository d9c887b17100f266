public interface DatabaseConnection {
}
